use super::frame::Frame;
use super::model::{FrameClass, Model};
use super::quasisaw::QuasiSawFrame;
use super::FrameError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Serialize, Deserialize)]
struct PointEntry {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FrameEntry {
    points: Vec<PointEntry>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    frame: FrameEntry,
    frame_class: FrameClass,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, FrameError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| FrameError::Json(e.to_string()))?;
        let names: Vec<String> = file.frame.points.iter().map(|p| p.id.clone()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FrameError::DuplicatePoint(n.clone()));
            }
        }
        let lookup = |s: &String| index.get(s).copied().ok_or_else(|| FrameError::UnknownPoint(s.clone()));
        let edges = file
            .frame
            .edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        let declared: Vec<Option<u8>> = file.frame.points.iter().map(|p| p.depth).collect();
        let frame = if declared.iter().all(Option::is_some) && !declared.is_empty() {
            let depth: Vec<u8> = declared.into_iter().map(|d| d.unwrap_or(0)).collect();
            if depth.iter().any(|&d| d > 1) {
                return Err(FrameError::NotQuasiSaw("depth must be 0 or 1".into()));
            }
            QuasiSawFrame::build(names, depth, &edges)?.into_frame()
        } else if declared.iter().any(Option::is_some) {
            return Err(FrameError::PartialDepths);
        } else {
            Frame::new(names, &edges)?
        };
        let mut valuation = BTreeMap::new();
        for (v, pts) in &file.valuation {
            valuation.insert(v.clone(), frame.set_from_names(pts)?);
        }
        Model::new(frame, valuation, file.frame_class)
    }

    pub fn to_json(&self) -> String {
        let frame = self.frame();
        let depths = frame.depths();
        let points = (0..frame.len())
            .map(|p| PointEntry { id: frame.name(p).to_string(), depth: depths.map(|d| d[p]) })
            .collect();
        let edges = frame
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (frame.name(a).to_string(), frame.name(b).to_string()))
            .collect();
        let valuation = self.valuation().iter().map(|(v, s)| (v.clone(), frame.set_names(s))).collect();
        let file = ModelFile { frame: FrameEntry { points, edges }, frame_class: self.class(), valuation };
        serde_json::to_string_pretty(&file).expect("model serialises")
    }
}
