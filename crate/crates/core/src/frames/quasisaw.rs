use super::frame::Frame;
use super::pointset::PointSet;
use super::FrameError;

/// A two-level quasi-order: depth-1 points see only depth-0 points.
#[derive(Debug, Clone)]
pub struct QuasiSawFrame {
    frame: Frame,
    w0: Vec<usize>,
    w1: Vec<usize>,
}

impl QuasiSawFrame {
    /// Build from names, depths (0 or 1) and arrows `z -> x` from depth 1 to depth 0.
    pub fn build(names: Vec<String>, depth: Vec<u8>, edges: &[(usize, usize)]) -> Result<Self, FrameError> {
        if depth.len() != names.len() {
            return Err(FrameError::NotQuasiSaw("depth list does not match points".into()));
        }
        for &(z, x) in edges {
            if z >= names.len() || x >= names.len() {
                return Err(FrameError::PointOutOfRange);
            }
            if depth[z] != 1 || depth[x] != 0 {
                return Err(FrameError::NotQuasiSaw(format!(
                    "arrow {} -> {} is not from depth 1 to depth 0",
                    names[z], names[x]
                )));
            }
        }
        let mut frame = Frame::new(names, edges)?;
        frame.set_depths(depth);
        Self::from_frame(frame)
    }

    pub fn from_named(depth0: &[&str], depth1: &[&str], edges: &[(&str, &str)]) -> Result<Self, FrameError> {
        let names: Vec<String> = depth0.iter().chain(depth1).map(|s| s.to_string()).collect();
        let depth: Vec<u8> = depth0.iter().map(|_| 0).chain(depth1.iter().map(|_| 1)).collect();
        let pos = |s: &str| names.iter().position(|x| x == s).ok_or_else(|| FrameError::UnknownPoint(s.into()));
        let e = edges
            .iter()
            .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        Self::build(names, depth, &e)
    }

    /// View a frame as a quasi-saw. Declared depths are checked; otherwise
    /// points with strict successors are depth 1.
    pub fn from_frame(mut frame: Frame) -> Result<Self, FrameError> {
        let n = frame.len();
        fn has_other(bits: &fixedbitset::FixedBitSet, x: usize) -> bool {
            bits.ones().any(|y| y != x)
        }
        for x in 0..n {
            if has_other(frame.up_bits(x), x) && has_other(frame.down_bits(x), x) {
                return Err(FrameError::NotQuasiSaw(format!("point {} has depth above 1", frame.name(x))));
            }
        }
        let derived: Vec<u8> = (0..n).map(|x| u8::from(has_other(frame.up_bits(x), x))).collect();
        let depth = match frame.depths() {
            Some(declared) => {
                for x in 0..n {
                    match (declared[x], derived[x]) {
                        (0, 0) | (1, 1) => {}
                        (1, 0) => return Err(FrameError::EmptyHub(frame.name(x).to_string())),
                        _ => {
                            return Err(FrameError::NotQuasiSaw(format!(
                                "point {} has a depth inconsistent with its arrows",
                                frame.name(x)
                            )))
                        }
                    }
                }
                declared.to_vec()
            }
            None => derived,
        };
        let w0 = (0..n).filter(|&x| depth[x] == 0).collect();
        let w1 = (0..n).filter(|&x| depth[x] == 1).collect();
        frame.set_depths(depth);
        Ok(QuasiSawFrame { frame, w0, w1 })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    pub fn depth0(&self) -> &[usize] {
        &self.w0
    }

    pub fn depth1(&self) -> &[usize] {
        &self.w1
    }

    pub fn depth(&self, p: usize) -> u8 {
        self.frame.depths().expect("quasi-saw depths")[p]
    }

    /// Depth-0 successors of a depth-1 point.
    pub fn succ(&self, z: usize) -> impl Iterator<Item = usize> + '_ {
        self.frame.up_bits(z).ones().filter(move |&y| y != z)
    }

    pub fn depth0_set(&self) -> PointSet {
        self.frame.set_from_points(self.w0.iter().copied())
    }

    /// `U` together with every depth-1 point seeing `U`.
    pub fn rc_from_support(&self, u: &PointSet) -> Result<PointSet, FrameError> {
        if u.frame_id() != self.frame.id() {
            return Err(FrameError::CrossFrame);
        }
        if u.iter().any(|p| self.depth(p) != 0) {
            return Err(FrameError::NotSupport);
        }
        Ok(self.rc_from_support_unchecked(u))
    }

    pub(crate) fn rc_from_support_unchecked(&self, u: &PointSet) -> PointSet {
        let mut out = u.clone();
        for &z in &self.w1 {
            if self.succ(z).any(|x| u.contains(x)) {
                out.insert(z);
            }
        }
        out
    }

    /// The RC test specialised to quasi-saws: depth-1 membership follows the support.
    pub fn is_regular_closed_by_support(&self, x: &PointSet) -> bool {
        self.w1.iter().all(|&z| x.contains(z) == self.succ(z).any(|y| x.contains(y)))
    }
}
