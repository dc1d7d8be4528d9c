use super::frame::Frame;
use super::pointset::PointSet;
use super::quasisaw::QuasiSawFrame;
use super::FrameError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Class of models a formula is interpreted over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameClass {
    /// Regular closed valuations over any finite frame.
    Regc,
    /// As `Regc`, over connected frames.
    Conregc,
    /// Arbitrary set valuations.
    All,
    /// Arbitrary set valuations over connected frames.
    Con,
    /// Regular closed valuations over a linear fence.
    Fence,
}

impl FrameClass {
    pub fn is_rc(self) -> bool {
        matches!(self, FrameClass::Regc | FrameClass::Conregc | FrameClass::Fence)
    }

    pub fn requires_connected(self) -> bool {
        matches!(self, FrameClass::Conregc | FrameClass::Con)
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameClass::Regc => "regc",
            FrameClass::Conregc => "conregc",
            FrameClass::All => "all",
            FrameClass::Con => "con",
            FrameClass::Fence => "fence",
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameClass {
    type Err = FrameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "regc" => Ok(FrameClass::Regc),
            "conregc" => Ok(FrameClass::Conregc),
            "all" => Ok(FrameClass::All),
            "con" => Ok(FrameClass::Con),
            "fence" => Ok(FrameClass::Fence),
            other => Err(FrameError::UnknownClass(other.to_string())),
        }
    }
}

/// A frame with a valuation of region variables, validated against its class.
#[derive(Debug, Clone)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, PointSet>,
    class: FrameClass,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, PointSet>, class: FrameClass) -> Result<Model, FrameError> {
        for (v, s) in &valuation {
            if s.frame_id() != frame.id() {
                return Err(FrameError::CrossFrameValuation(v.clone()));
            }
            if class.is_rc() && !frame.is_regular_closed_unchecked(s) {
                return Err(FrameError::NotRegularClosed(v.clone()));
            }
        }
        if class.requires_connected() && !frame.is_connected() {
            return Err(FrameError::Disconnected);
        }
        if class == FrameClass::Fence {
            fence_cells(&frame)?;
        }
        Ok(Model { frame, valuation, class })
    }

    /// The unique model over the empty space.
    pub fn empty(class: FrameClass) -> Model {
        Model { frame: Frame::empty(), valuation: BTreeMap::new(), class }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, PointSet> {
        &self.valuation
    }

    pub fn class(&self) -> FrameClass {
        self.class
    }

    pub fn value(&self, var: &str) -> Option<&PointSet> {
        self.valuation.get(var)
    }

    pub fn quasi_saw(&self) -> Result<QuasiSawFrame, FrameError> {
        QuasiSawFrame::from_frame(self.frame.clone())
    }

    /// Same frame and valuation under another class, revalidated.
    pub fn with_class(&self, class: FrameClass) -> Result<Model, FrameError> {
        Model::new(self.frame.clone(), self.valuation.clone(), class)
    }

    /// Extend the valuation (revalidated).
    pub fn with_value(&self, var: &str, set: PointSet) -> Result<Model, FrameError> {
        let mut valuation = self.valuation.clone();
        valuation.insert(var.to_string(), set);
        Model::new(self.frame.clone(), valuation, self.class)
    }
}

/// Cells of a linear fence from one end to the other: open intervals at
/// even positions, boundary points at odd positions.
pub fn fence_cells(frame: &Frame) -> Result<Vec<usize>, FrameError> {
    let qs = QuasiSawFrame::from_frame(frame.clone()).map_err(|e| FrameError::NotFence(e.to_string()))?;
    let n = frame.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &z in qs.depth1() {
        let succ: Vec<usize> = qs.succ(z).collect();
        if succ.len() != 2 {
            return Err(FrameError::NotFence(format!("point {} must bound exactly two intervals", frame.name(z))));
        }
        for x in succ {
            nbrs[z].push(x);
            nbrs[x].push(z);
        }
    }
    if nbrs.iter().any(|v| v.len() > 2) || qs.depth0().len() != qs.depth1().len() + 1 || !frame.is_connected() {
        return Err(FrameError::NotFence("incidence graph is not a path".into()));
    }
    let start = qs
        .depth0()
        .iter()
        .copied()
        .find(|&x| nbrs[x].len() <= 1)
        .ok_or_else(|| FrameError::NotFence("no end interval".into()))?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = nbrs[cur].iter().find(|&&y| y != prev) {
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Ok(order)
}
