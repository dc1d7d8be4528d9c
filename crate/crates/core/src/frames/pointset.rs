use fixedbitset::FixedBitSet;
use std::sync::atomic::{AtomicU64, Ordering};

/// Identity of a frame; point sets from different frames never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameId(u64);

impl FrameId {
    pub(crate) fn fresh() -> FrameId {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        FrameId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

/// A subset of the points of one frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    frame: FrameId,
    bits: FixedBitSet,
}

impl PointSet {
    pub(crate) fn from_bits(frame: FrameId, bits: FixedBitSet) -> PointSet {
        PointSet { frame, bits }
    }

    pub(crate) fn empty(frame: FrameId, n: usize) -> PointSet {
        PointSet { frame, bits: FixedBitSet::with_capacity(n) }
    }

    pub(crate) fn full(frame: FrameId, n: usize) -> PointSet {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        PointSet { frame, bits }
    }

    pub fn frame_id(&self) -> FrameId {
        self.frame
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.bits.contains(p)
    }

    pub fn insert(&mut self, p: usize) {
        self.bits.insert(p)
    }

    pub fn remove(&mut self, p: usize) {
        self.bits.set(p, false)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn same_frame(&self, other: &PointSet) -> bool {
        self.frame == other.frame
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        debug_assert!(self.same_frame(other));
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        PointSet { frame: self.frame, bits }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        debug_assert!(self.same_frame(other));
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        PointSet { frame: self.frame, bits }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        debug_assert!(self.same_frame(other));
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        PointSet { frame: self.frame, bits }
    }

    /// Complement relative to the frame's carrier.
    pub fn complement(&self) -> PointSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        PointSet { frame: self.frame, bits }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        debug_assert!(self.same_frame(other));
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        debug_assert!(self.same_frame(other));
        !self.bits.is_disjoint(&other.bits)
    }
}
