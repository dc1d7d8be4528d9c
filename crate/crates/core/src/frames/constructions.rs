use super::frame::Frame;
use super::model::{FrameClass, Model};
use super::pointset::PointSet;
use super::quasisaw::QuasiSawFrame;
use super::FrameError;
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Disjoint union of `k_i`-forks: hub `f<i>` with teeth `f<i>t<j>`.
pub fn make_fork_frame(specs: &[usize]) -> Result<QuasiSawFrame, FrameError> {
    let mut names = Vec::new();
    let mut depth = Vec::new();
    let mut edges = Vec::new();
    for (i, &k) in specs.iter().enumerate() {
        if k < 1 {
            return Err(FrameError::BadForkArity);
        }
        let hub = names.len();
        names.push(format!("f{i}"));
        depth.push(1);
        for j in 0..k {
            edges.push((hub, names.len()));
            names.push(format!("f{i}t{j}"));
            depth.push(0);
        }
    }
    QuasiSawFrame::build(names, depth, &edges)
}

/// Turn a finite model with regular closed valuation into a quasi-saw model
/// on the same carrier with the same extensions and component counts for
/// every term of the regular-closed algebra.
pub fn broom(model: &Model) -> Result<Model, FrameError> {
    let frame = model.frame();
    for (v, s) in model.valuation() {
        if !frame.is_regular_closed_unchecked(s) {
            return Err(FrameError::NotRegularClosed(v.clone()));
        }
    }
    let n = frame.len();
    let finals: BTreeSet<usize> = frame.final_points().into_iter().collect();
    // One representative per final cluster of size >= 2 moves up to depth 1.
    let mut lifted = HashSet::new();
    let mut seen = HashSet::new();
    for &x in &finals {
        if seen.contains(&x) {
            continue;
        }
        let cluster: Vec<usize> = frame.up_bits(x).ones().collect();
        seen.extend(cluster.iter().copied());
        if cluster.len() >= 2 {
            lifted.insert(cluster[0]);
        }
    }
    let depth: Vec<u8> = (0..n).map(|x| u8::from(!finals.contains(&x) || lifted.contains(&x))).collect();
    let mut edges = Vec::new();
    for x in 0..n {
        if depth[x] == 1 {
            for y in frame.up_bits(x).ones() {
                if depth[y] == 0 {
                    edges.push((x, y));
                }
            }
        }
    }
    let qs = QuasiSawFrame::build(frame.names().to_vec(), depth, &edges)?;
    let out = qs.into_frame();
    let valuation = model.valuation().iter().map(|(v, s)| (v.clone(), out.adopt(s))).collect();
    Model::new(out, valuation, FrameClass::Regc)
}

/// Which literal family `connectify` must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectifyMode {
    B,
    Rcc8,
}

fn fresh_name(taken: &mut HashSet<String>, stem: &str) -> String {
    let mut i = 0usize;
    loop {
        let cand = format!("{stem}{i}");
        if taken.insert(cand.clone()) {
            return cand;
        }
        i += 1;
    }
}

/// Make a quasi-saw model connected while keeping the truth of every
/// literal of the chosen language over the valuation's variables.
pub fn connectify(model: &Model, mode: ConnectifyMode) -> Result<Model, FrameError> {
    let qs = model.quasi_saw()?;
    let frame = qs.frame();
    if frame.is_connected() {
        return model.with_class(FrameClass::Conregc);
    }
    let mut names: Vec<String> = frame.names().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut depth: Vec<u8> = (0..frame.len()).map(|p| qs.depth(p)).collect();
    let mut edges: Vec<(usize, usize)> = frame.strict_pairs();
    let vars: Vec<&String> = model.valuation().keys().collect();
    // Depth-0 membership of new points, per variable.
    let mut extra0: Vec<(usize, BTreeSet<usize>)> = Vec::new();
    let mut add_point = |names: &mut Vec<String>, depth: &mut Vec<u8>, stem: &str, d: u8| {
        names.push(fresh_name(&mut taken, stem));
        depth.push(d);
        names.len() - 1
    };
    match mode {
        ConnectifyMode::B => {
            let hub = add_point(&mut names, &mut depth, "_hub", 1);
            for &x in qs.depth0() {
                edges.push((hub, x));
            }
        }
        ConnectifyMode::Rcc8 => {
            let values: Vec<&PointSet> = vars.iter().map(|v| &model.valuation()[*v]).collect();
            let type_of = |x: usize| -> BTreeSet<usize> { (0..vars.len()).filter(|&i| values[i].contains(x)).collect() };
            let w = add_point(&mut names, &mut depth, "_w", 0);
            extra0.push((w, BTreeSet::new()));
            for comp in frame.components_unchecked(&frame.full_set()) {
                let start = comp
                    .iter()
                    .find(|&p| qs.depth(p) == 0)
                    .ok_or_else(|| FrameError::NotQuasiSaw("component without depth-0 point".into()))?;
                let mut cur = start;
                let mut ty = type_of(start);
                // Step down through types, dropping one containment-minimal region class at a time.
                while let Some(&x) = ty.iter().find(|&&x| {
                    ty.iter().all(|&r| !values[r].is_subset(values[x]) || values[x].is_subset(values[r]))
                }) {
                    let class: BTreeSet<usize> = ty.iter().copied().filter(|&r| values[r] == values[x]).collect();
                    let next_ty: BTreeSet<usize> = ty.difference(&class).copied().collect();
                    let b = add_point(&mut names, &mut depth, "_s", 0);
                    let z = add_point(&mut names, &mut depth, "_l", 1);
                    edges.push((z, cur));
                    edges.push((z, b));
                    extra0.push((b, next_ty.clone()));
                    cur = b;
                    ty = next_ty;
                }
                let z = add_point(&mut names, &mut depth, "_l", 1);
                edges.push((z, cur));
                edges.push((z, w));
            }
        }
    }
    let qs2 = QuasiSawFrame::build(names, depth, &edges)?;
    let out = qs2.frame();
    let mut valuation = BTreeMap::new();
    for (i, v) in vars.iter().enumerate() {
        let old = &model.valuation()[*v];
        let mut support: Vec<usize> = old.iter().filter(|&p| qs.depth(p) == 0).collect();
        support.extend(extra0.iter().filter(|(_, ty)| ty.contains(&i)).map(|(p, _)| *p));
        let set = qs2.rc_from_support_unchecked(&out.set_from_points(support));
        valuation.insert((*v).clone(), set);
    }
    Model::new(qs2.into_frame(), valuation, FrameClass::Conregc)
}

/// The model over the subspace `s` with `r -> s * r`.
pub fn subspace_model(model: &Model, s: &str) -> Result<Model, FrameError> {
    let frame = model.frame();
    let sset = model.value(s).ok_or_else(|| FrameError::UnknownVariable(s.to_string()))?;
    if !frame.is_regular_closed_unchecked(sset) {
        return Err(FrameError::NotRegularClosed(s.to_string()));
    }
    let keep: Vec<usize> = sset.iter().collect();
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let names = keep.iter().map(|&p| frame.name(p).to_string()).collect();
    let mut edges = Vec::new();
    for &x in &keep {
        for y in frame.up_bits(x).ones() {
            if x != y {
                if let Some(&j) = pos.get(&y) {
                    edges.push((pos[&x], j));
                }
            }
        }
    }
    let mut sub = Frame::new(names, &edges)?;
    if let Some(d) = frame.depths() {
        sub.set_depths(keep.iter().map(|&p| d[p]).collect());
    }
    let mut valuation = BTreeMap::new();
    for (v, set) in model.valuation() {
        let meet = frame.closure_unchecked(&frame.interior_unchecked(&set.intersection(sset)));
        valuation.insert(v.clone(), sub.set_from_points(meet.iter().map(|p| pos[&p])));
    }
    let class = match (model.class().is_rc(), sub.is_connected() && model.class().requires_connected()) {
        (true, true) => FrameClass::Conregc,
        (true, false) => FrameClass::Regc,
        (false, true) => FrameClass::Con,
        (false, false) => FrameClass::All,
    };
    Model::new(sub, valuation, class)
}
