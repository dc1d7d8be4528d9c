use crate::formula::{parse, Formula};
use crate::frames::{Frame, FrameClass, Model, QuasiSawFrame};
use crate::random::{random_model, seeded};
use crate::semantics::holds;
use crate::solver::{auto, check_certificate, SolveOptions, Status};
use std::collections::BTreeMap;
use std::fmt;

/// How an entry is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    /// Satisfiability with the given search bound.
    Solve { bound: usize },
    /// Validity: the negation is decided with the given bound.
    Valid { bound: usize },
    /// Model checking on random models of the entry's class.
    Samples { count: usize, max_points: usize },
    /// Satisfiability shown only by the bundled witness.
    WitnessOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Sat,
    Unsat,
    UnsatWithinBound(usize),
    Valid,
    /// No random sample falsifies the formula.
    NoCounterexample,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Sat => f.write_str("SAT"),
            Expected::Unsat => f.write_str("UNSAT"),
            Expected::UnsatWithinBound(n) => write!(f, "UNSAT_WITHIN_BOUND({n})"),
            Expected::Valid => f.write_str("VALID"),
            Expected::NoCounterexample => f.write_str("NO_COUNTEREXAMPLE"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub formula: Formula,
    pub frame_class: FrameClass,
    pub query: Query,
    pub expected: Expected,
    pub witness: Option<Model>,
}

/// Outcome of running one entry.
#[derive(Debug, Clone)]
pub struct EntryOutcome {
    pub pass: bool,
    pub observed: String,
}

impl CorpusEntry {
    /// Decide the entry and compare with its expectation; a bundled witness
    /// must also model-check. `seed` drives the random samples.
    pub fn run(&self, threads: Option<usize>, seed: u64) -> EntryOutcome {
        let mut notes = Vec::new();
        let mut pass = true;
        if let Some(w) = &self.witness {
            let ok = matches!(check_certificate(w, &self.formula), Ok(true));
            notes.push(format!("witness={}", if ok { "ok" } else { "FAILED" }));
            pass &= ok;
        }
        let options = |bound| SolveOptions { max_points: bound, timeout: None, threads };
        let observed = match self.query {
            Query::Solve { bound } => match auto(&self.formula, self.frame_class, &options(bound)) {
                Ok(res) => {
                    let cert_ok = res
                        .certificate
                        .as_ref()
                        .is_none_or(|m| matches!(check_certificate(m, &self.formula), Ok(true)));
                    pass &= cert_ok;
                    let got = match res.status {
                        Status::Sat => Expected::Sat,
                        Status::Unsat => Expected::Unsat,
                        Status::UnsatWithinBound => Expected::UnsatWithinBound(res.bound_used),
                    };
                    Some(got)
                }
                Err(e) => {
                    notes.push(format!("error={e}"));
                    None
                }
            },
            Query::Valid { bound } => {
                let negated = Formula::not(self.formula.clone());
                match auto(&negated, self.frame_class, &options(bound)) {
                    Ok(res) => Some(match res.status {
                        Status::Unsat => Expected::Valid,
                        Status::Sat => Expected::Sat,
                        Status::UnsatWithinBound => Expected::UnsatWithinBound(res.bound_used),
                    }),
                    Err(e) => {
                        notes.push(format!("error={e}"));
                        None
                    }
                }
            }
            Query::Samples { count, max_points } => {
                let vars: Vec<String> = self.formula.vars().into_iter().collect();
                let mut rng = seeded(seed);
                let mut failures = 0usize;
                for _ in 0..count {
                    let m = random_model(&mut rng, self.frame_class, max_points, &vars);
                    if !matches!(holds(&m, &self.formula), Ok(true)) {
                        failures += 1;
                    }
                }
                notes.push(format!("samples={count} counterexamples={failures}"));
                (failures == 0).then_some(Expected::NoCounterexample)
            }
            Query::WitnessOnly => self.witness.as_ref().map(|_| Expected::Sat),
        };
        pass &= observed == Some(self.expected);
        let mut text = observed.map_or_else(|| "none".to_string(), |o| o.to_string());
        for n in notes {
            text.push(' ');
            text.push_str(&n);
        }
        EntryOutcome { pass, observed: text }
    }
}

fn formula(text: &str) -> Formula {
    parse(text).expect("corpus formula parses")
}

fn entry(name: &'static str, text: &str, class: FrameClass, query: Query, expected: Expected) -> CorpusEntry {
    CorpusEntry { name, formula: formula(text), frame_class: class, query, expected, witness: None }
}

fn with_witness(mut e: CorpusEntry, w: Model) -> CorpusEntry {
    e.witness = Some(w);
    e
}

/// Quasi-saw model from named depth-0/depth-1 points, hub edges and
/// region supports (depth-0 points).
fn saw_model(
    depth0: &[&str],
    depth1: &[&str],
    edges: &[(&str, &str)],
    supports: &[(&str, &[&str])],
    class: FrameClass,
) -> Model {
    let saw = QuasiSawFrame::from_named(depth0, depth1, edges).expect("witness frame");
    let mut val = BTreeMap::new();
    for (var, support) in supports {
        let u = saw.frame().set_from_names(support).expect("witness support");
        val.insert(var.to_string(), saw.rc_from_support(&u).expect("support is depth 0"));
    }
    Model::new(saw.into_frame(), val, class).expect("witness model")
}

fn k_fork_witness(vars: usize) -> Model {
    let teeth: Vec<String> = (1..=vars).map(|i| format!("a{i}")).collect();
    let names: Vec<&str> = teeth.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str)> = names.iter().map(|t| ("z", *t)).collect();
    let owned: Vec<(String, [&str; 1])> = names.iter().enumerate().map(|(i, t)| (format!("r{}", i + 1), [*t])).collect();
    let supports: Vec<(&str, &[&str])> = owned.iter().map(|(v, s)| (v.as_str(), &s[..])).collect();
    saw_model(&names, &["z"], &edges, &supports, FrameClass::Regc)
}

/// Vertices and edge midpoints at depth 0; each edge's hubs link its
/// midpoint to both ends, and one hub per vertex touches a common outside point.
fn k5_witness() -> Model {
    let pairs: Vec<(usize, usize)> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j))).collect();
    let mut depth0: Vec<String> = (1..=5).map(|i| format!("v{i}")).collect();
    depth0.extend(pairs.iter().map(|(i, j)| format!("e{i}{j}")));
    depth0.push("o".into());
    let mut depth1: Vec<String> = (1..=5).map(|i| format!("g{i}")).collect();
    let mut edges: Vec<(String, String)> = (1..=5)
        .flat_map(|i| [(format!("g{i}"), format!("v{i}")), (format!("g{i}"), "o".to_string())])
        .collect();
    for (i, j) in &pairs {
        for end in [i, j] {
            let hub = format!("c{i}{j}_{end}");
            edges.push((hub.clone(), format!("v{end}")));
            edges.push((hub.clone(), format!("e{i}{j}")));
            depth1.push(hub);
        }
    }
    let mut supports: Vec<(String, Vec<String>)> = (1..=5).map(|i| (format!("r{i}"), vec![format!("v{i}")])).collect();
    supports.extend(
        pairs
            .iter()
            .map(|(i, j)| (format!("r{i}{j}"), vec![format!("v{i}"), format!("v{j}"), format!("e{i}{j}")])),
    );
    let d0: Vec<&str> = depth0.iter().map(String::as_str).collect();
    let d1: Vec<&str> = depth1.iter().map(String::as_str).collect();
    let es: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let sup_refs: Vec<Vec<&str>> = supports.iter().map(|(_, s)| s.iter().map(String::as_str).collect()).collect();
    let sups: Vec<(&str, &[&str])> =
        supports.iter().zip(&sup_refs).map(|((v, _), s)| (v.as_str(), s.as_slice())).collect();
    saw_model(&d0, &d1, &es, &sups, FrameClass::Regc)
}

fn k5_formula() -> String {
    let pairs: Vec<(usize, usize)> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j))).collect();
    let mut parts = Vec::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            if i != k && i != l && j != k && j != l {
                parts.push(format!("DC(r{i}{j}, r{k}{l})"));
            }
        }
    }
    for &(j, k) in &pairs {
        parts.push(format!("TPP(r{j}, r{j}{k})"));
        parts.push(format!("TPP(r{k}, r{j}{k})"));
    }
    parts.extend(pairs.iter().map(|(i, j)| format!("conn(r{i}{j})")));
    parts.join(" & ")
}

/// Two closed disjoint rings on an 8-cycle, each with connected complement.
fn torus_witness() -> Model {
    let names: Vec<String> = (0..8).map(|i| format!("p{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..4).flat_map(|k| [(2 * k + 1, 2 * k), (2 * k + 1, (2 * k + 2) % 8)]).collect();
    let frame = Frame::new(names, &edges).expect("cycle frame");
    let mut val = BTreeMap::new();
    val.insert("r1".to_string(), frame.set_from_names(&["p7", "p0", "p1"]).expect("points"));
    val.insert("r2".to_string(), frame.set_from_names(&["p3", "p4", "p5"]).expect("points"));
    Model::new(frame, val, FrameClass::Con).expect("torus witness")
}

/// The named example corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    use Expected::*;
    use FrameClass::*;
    let solve = |bound| Query::Solve { bound };
    let samples = Query::Samples { count: 500, max_points: 8 };
    let phi1 = "conn(r1) & conn(r2) & conn(r3) & EC(r1, r2) & EC(r1, r3) & EC(r2, r3)";
    let four = "conn(r1) & EC(r1, r2) & EC(r1, r3) & EC(r1, r4) & EC(r2, r3) & EC(r2, r4) & EC(r3, r4)";
    let sep = "!C(r, -r) & r != 0 & r != 1";
    let fig5 = "!conn(r) & conn(1)";
    vec![
        entry("rcc8-tangent-unsat", "TPP(r1, r2) & NTPP(r1, r3) & EC(r2, r3)", Regc, solve(8), Unsat),
        entry(
            "rcc8-tangent-valid",
            "TPP(r1, r2) & NTPP(r1, r3) -> PO(r2, r3) | TPP(r2, r3) | NTPP(r2, r3)",
            Regc,
            Query::Valid { bound: 8 },
            Valid,
        ),
        entry("ec-complement-unsat", "EC(r1, r2) & EC(r1, -r2)", Regc, solve(8), Unsat),
        entry(
            "ec-distribution-valid",
            "EC(r1 + r2, r3) -> EC(r1, r3) | EC(r2, r3)",
            Regc,
            Query::Valid { bound: 8 },
            Valid,
        ),
        entry("overlap-sum-connected", "conn(r1) & conn(r2) & r1 * r2 != 0 -> conn(r1 + r2)", Regc, samples, NoCounterexample),
        entry(
            "closure-sandwich-connected",
            "conn(r1) & r1 <= r2 & r2 <= cl(r1) -> conn(r2)",
            All,
            samples,
            NoCounterexample,
        ),
        entry(
            "overlap-sum-components",
            "conn_le(2, r1) & conn_le(3, r2) & r1 * r2 != 0 -> conn_le(4, r1 + r2)",
            Regc,
            samples,
            NoCounterexample,
        ),
        with_witness(
            entry("separated-region-regc", sep, Regc, solve(4), Sat),
            saw_model(&["a", "b"], &[], &[], &[("r", &["a"])], Regc),
        ),
        entry("separated-region-conregc", sep, Conregc, solve(12), UnsatWithinBound(12)),
        entry("split-region-below-minimum", fig5, Regc, solve(4), UnsatWithinBound(4)),
        with_witness(
            entry("split-region-minimal", fig5, Regc, solve(5), Sat),
            saw_model(
                &["a", "b", "c"],
                &["z1", "z2"],
                &[("z1", "a"), ("z1", "b"), ("z2", "b"), ("z2", "c")],
                &[("r", &["a", "c"])],
                Regc,
            ),
        ),
        with_witness(entry("three-touching-regc", phi1, Regc, solve(6), Sat), k_fork_witness(3)),
        entry("three-touching-fence", phi1, Fence, solve(20), UnsatWithinBound(20)),
        with_witness(entry("four-touching-regc", four, Regc, solve(6), Sat), k_fork_witness(4)),
        entry("four-touching-fence", four, Fence, solve(20), UnsatWithinBound(20)),
        with_witness(entry("k5-incidence-regc", &k5_formula(), Regc, Query::WitnessOnly, Sat), k5_witness()),
        with_witness(
            entry(
                "torus-rings-con",
                "r1 ^ r2 = 0 & cl(r1) <= r1 & cl(r2) <= r2 & conn(~r1) & conn(~r2) & !conn(~r1 ^ ~r2)",
                Con,
                solve(8),
                Sat,
            ),
            torus_witness(),
        ),
    ]
}
