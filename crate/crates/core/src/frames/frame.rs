use super::pointset::{FrameId, PointSet};
use super::FrameError;
use fixedbitset::FixedBitSet;
use std::collections::HashMap;

/// A finite quasi-order read as an Aleksandrov space: opens are up-sets.
#[derive(Debug, Clone)]
pub struct Frame {
    id: FrameId,
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// Depths when the frame is a validated quasi-saw.
    depth: Option<Vec<u8>>,
}

impl Frame {
    /// Build from point names and a generator relation (`(x, y)` means `x R y`);
    /// the reflexive-transitive closure is taken.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Frame, FrameError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(FrameError::DuplicatePoint(name.clone()));
            }
        }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(n);
                b.insert(i);
                b
            })
            .collect();
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(FrameError::PointOutOfRange);
            }
            up[x].insert(y);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Ok(Frame { id: FrameId::fresh(), names, index, up, down, depth: None })
    }

    pub fn from_named(names: &[&str], edges: &[(&str, &str)]) -> Result<Frame, FrameError> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let pos = |s: &str| {
            owned
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| FrameError::UnknownPoint(s.to_string()))
        };
        let e = edges
            .iter()
            .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        Frame::new(owned, &e)
    }

    pub fn empty() -> Frame {
        Frame::new(Vec::new(), &[]).expect("empty frame")
    }

    pub fn id(&self) -> FrameId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// `x R y`.
    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up_bits(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_bits(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn depths(&self) -> Option<&[u8]> {
        self.depth.as_deref()
    }

    pub(crate) fn set_depths(&mut self, depth: Vec<u8>) {
        self.depth = Some(depth);
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.id, self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.id, self.len())
    }

    pub fn set_from_points(&self, points: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = self.empty_set();
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet, FrameError> {
        let mut s = self.empty_set();
        for n in names {
            let p = self.point(n.as_ref()).ok_or_else(|| FrameError::UnknownPoint(n.as_ref().to_string()))?;
            s.insert(p);
        }
        Ok(s)
    }

    /// Re-home a point set onto this frame by point index (same carrier size).
    pub(crate) fn adopt(&self, s: &PointSet) -> PointSet {
        PointSet::from_bits(self.id, s.bits().clone())
    }

    pub fn set_names(&self, s: &PointSet) -> Vec<String> {
        s.iter().map(|p| self.names[p].clone()).collect()
    }

    fn check(&self, s: &PointSet) -> Result<(), FrameError> {
        if s.frame_id() == self.id {
            Ok(())
        } else {
            Err(FrameError::CrossFrame)
        }
    }

    pub(crate) fn interior_unchecked(&self, x: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in x.iter() {
            if self.up[p].is_subset(x.bits()) {
                out.insert(p);
            }
        }
        out
    }

    pub(crate) fn closure_unchecked(&self, x: &PointSet) -> PointSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for p in x.iter() {
            bits.union_with(&self.down[p]);
        }
        PointSet::from_bits(self.id, bits)
    }

    /// Largest up-closed subset of `x`.
    pub fn interior(&self, x: &PointSet) -> Result<PointSet, FrameError> {
        self.check(x)?;
        Ok(self.interior_unchecked(x))
    }

    /// Down-closure of `x`.
    pub fn closure(&self, x: &PointSet) -> Result<PointSet, FrameError> {
        self.check(x)?;
        Ok(self.closure_unchecked(x))
    }

    pub(crate) fn is_regular_closed_unchecked(&self, x: &PointSet) -> bool {
        self.closure_unchecked(&self.interior_unchecked(x)) == *x
    }

    pub fn is_regular_closed(&self, x: &PointSet) -> Result<bool, FrameError> {
        self.check(x)?;
        Ok(self.is_regular_closed_unchecked(x))
    }

    pub(crate) fn components_unchecked(&self, x: &PointSet) -> Vec<PointSet> {
        let mut seen = self.empty_set();
        let mut out = Vec::new();
        for start in x.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = self.empty_set();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(p) = stack.pop() {
                comp.insert(p);
                for q in self.up[p].ones().chain(self.down[p].ones()) {
                    if x.contains(q) && !seen.contains(q) {
                        seen.insert(q);
                        stack.push(q);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Maximal connected subsets of `x` under the undirected order graph.
    pub fn components(&self, x: &PointSet) -> Result<Vec<PointSet>, FrameError> {
        self.check(x)?;
        Ok(self.components_unchecked(x))
    }

    /// The empty frame counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components_unchecked(&self.full_set()).len() <= 1
    }

    /// Generator pairs `x R y` with `x != y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, row) in self.up.iter().enumerate() {
            for y in row.ones() {
                if x != y {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Points in final clusters: `x R y` implies `y R x`.
    pub fn final_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.up[x].ones().all(|y| self.up[y].contains(x)))
            .collect()
    }
}
