use super::*;
use std::collections::BTreeMap;

fn f1() -> QuasiSawFrame {
    QuasiSawFrame::from_named(&["a", "b"], &["z"], &[("z", "a"), ("z", "b")]).unwrap()
}

fn set(frame: &Frame, pts: &[&str]) -> PointSet {
    frame.set_from_names(pts).unwrap()
}

fn names(frame: &Frame, s: &PointSet) -> Vec<String> {
    let mut v = frame.set_names(s);
    v.sort();
    v
}

fn fig5() -> Model {
    let qs = QuasiSawFrame::from_named(
        &["a", "b", "c"],
        &["z1", "z2"],
        &[("z1", "a"), ("z1", "b"), ("z2", "b"), ("z2", "c")],
    )
    .unwrap();
    let frame = qs.into_frame();
    let r = set(&frame, &["a", "c", "z1", "z2"]);
    let s = set(&frame, &["a", "b", "z1", "z2"]);
    Model::new(frame, BTreeMap::from([("r".to_string(), r), ("s".to_string(), s)]), FrameClass::Regc).unwrap()
}

#[test]
fn interior_and_closure_on_f1() {
    let qs = f1();
    let f = qs.frame();
    assert_eq!(names(f, &f.interior(&set(f, &["a", "z"])).unwrap()), vec!["a"]);
    assert_eq!(f.interior(&f.full_set()).unwrap(), f.full_set());
    assert!(f.interior(&set(f, &["z"])).unwrap().is_empty());
    assert_eq!(names(f, &f.closure(&set(f, &["a"])).unwrap()), vec!["a", "z"]);
    assert!(f.closure(&f.empty_set()).unwrap().is_empty());
    assert_eq!(names(f, &f.closure(&set(f, &["z"])).unwrap()), vec!["z"]);
}

#[test]
fn regular_closed_on_f1() {
    let qs = f1();
    let f = qs.frame();
    assert!(f.is_regular_closed(&set(f, &["a", "z"])).unwrap());
    assert!(!f.is_regular_closed(&set(f, &["z"])).unwrap());
    assert!(f.is_regular_closed(&f.full_set()).unwrap());
}

#[test]
fn cross_frame_sets_are_rejected() {
    let a = f1();
    let b = f1();
    let x = b.frame().full_set();
    assert_eq!(a.frame().interior(&x), Err(FrameError::CrossFrame));
    assert_eq!(a.rc_from_support(&x), Err(FrameError::CrossFrame));
}

#[test]
fn rc_from_support_on_f1() {
    let qs = f1();
    let f = qs.frame();
    assert_eq!(names(f, &qs.rc_from_support(&set(f, &["a"])).unwrap()), vec!["a", "z"]);
    assert!(qs.rc_from_support(&f.empty_set()).unwrap().is_empty());
    assert_eq!(names(f, &qs.rc_from_support(&set(f, &["a", "b"])).unwrap()), vec!["a", "b", "z"]);
    assert_eq!(qs.rc_from_support(&set(f, &["z"])), Err(FrameError::NotSupport));
}

#[test]
fn components_examples() {
    let m = fig5();
    let f = m.frame();
    assert_eq!(f.components(m.value("r").unwrap()).unwrap().len(), 2);
    assert!(f.components(&f.empty_set()).unwrap().is_empty());
    let qs = f1();
    assert_eq!(qs.frame().components(&qs.frame().full_set()).unwrap().len(), 1);
}

#[test]
fn connectivity_examples() {
    assert!(f1().frame().is_connected());
    assert!(!make_fork_frame(&[1, 1]).unwrap().frame().is_connected());
    assert!(Frame::empty().is_connected());
}

#[test]
fn fork_frames() {
    assert_eq!(make_fork_frame(&[1]).unwrap().frame().len(), 2);
    let four = make_fork_frame(&[4]).unwrap();
    assert_eq!(four.frame().len(), 5);
    assert_eq!(four.depth1().len(), 1);
    assert_eq!(four.succ(four.depth1()[0]).count(), 4);
    let two = make_fork_frame(&[1, 2]).unwrap();
    assert_eq!(two.frame().len(), 5);
    assert_eq!(two.frame().components(&two.frame().full_set()).unwrap().len(), 2);
    assert_eq!(make_fork_frame(&[2, 0]).unwrap_err(), FrameError::BadForkArity);
}

#[test]
fn broom_on_a_cluster() {
    let f = Frame::from_named(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap();
    let r = f.full_set();
    let m = Model::new(f, BTreeMap::from([("r".to_string(), r)]), FrameClass::Regc).unwrap();
    let b = broom(&m).unwrap();
    let qs = b.quasi_saw().unwrap();
    assert_eq!(qs.depth0().len(), 1);
    assert_eq!(qs.depth1().len(), 1);
    assert_eq!(b.value("r").unwrap().len(), 2);
}

#[test]
fn broom_on_a_chain() {
    let f = Frame::from_named(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
    let r = f.full_set();
    let m = Model::new(f, BTreeMap::from([("r".to_string(), r)]), FrameClass::Regc).unwrap();
    let b = broom(&m).unwrap();
    let bf = b.frame();
    let pairs: Vec<(String, String)> =
        bf.strict_pairs().into_iter().map(|(p, q)| (bf.name(p).into(), bf.name(q).into())).collect();
    assert_eq!(pairs, vec![("x".to_string(), "z".to_string()), ("y".to_string(), "z".to_string())]);
    assert_eq!(bf.components(b.value("r").unwrap()).unwrap().len(), 1);
}

#[test]
fn broom_keeps_a_quasi_saw_order() {
    let m = fig5();
    let b = broom(&m).unwrap();
    assert_eq!(b.frame().strict_pairs(), m.frame().strict_pairs());
    assert_eq!(b.frame().set_names(b.value("r").unwrap()), m.frame().set_names(m.value("r").unwrap()));
}

fn two_forks_dc() -> Model {
    let qs = make_fork_frame(&[1, 1]).unwrap();
    let f = qs.frame();
    let r1 = qs.rc_from_support(&set(f, &["f0t0"])).unwrap();
    let r2 = qs.rc_from_support(&set(f, &["f1t0"])).unwrap();
    Model::new(qs.into_frame(), BTreeMap::from([("r1".into(), r1), ("r2".into(), r2)]), FrameClass::Regc).unwrap()
}

#[test]
fn connectify_rcc8_keeps_disconnection() {
    let m = two_forks_dc();
    let c = connectify(&m, ConnectifyMode::Rcc8).unwrap();
    assert_eq!(c.class(), FrameClass::Conregc);
    assert!(c.frame().is_connected());
    assert!(!c.value("r1").unwrap().intersects(c.value("r2").unwrap()));
    let qs = c.quasi_saw().unwrap();
    assert!(qs.depth0().iter().any(|&p| c.frame().name(p).starts_with("_w")));
}

#[test]
fn connectify_b_keeps_disjointness() {
    let m = two_forks_dc();
    let c = connectify(&m, ConnectifyMode::B).unwrap();
    assert!(c.frame().is_connected());
    let f = c.frame();
    let meet = f.closure(&f.interior(&c.value("r1").unwrap().intersection(c.value("r2").unwrap())).unwrap()).unwrap();
    assert!(meet.is_empty());
}

#[test]
fn connectify_leaves_connected_models() {
    let m = fig5();
    let c = connectify(&m, ConnectifyMode::Rcc8).unwrap();
    assert_eq!(c.frame().len(), m.frame().len());
    assert_eq!(c.class(), FrameClass::Conregc);
}

#[test]
fn subspace_examples() {
    let m = fig5();
    let f = m.frame();
    let m1 = m.with_value("one", f.full_set()).unwrap();
    let s1 = subspace_model(&m1, "one").unwrap();
    assert_eq!(s1.frame().len(), m.frame().len());
    assert_eq!(s1.frame().set_names(s1.value("r").unwrap()), f.set_names(m.value("r").unwrap()));
    let m0 = m.with_value("zero", f.empty_set()).unwrap();
    assert!(subspace_model(&m0, "zero").unwrap().frame().is_empty());

    let sub = subspace_model(&m, "s").unwrap();
    assert_eq!(sub.frame().len(), 4);
    let rs = f.closure(&f.interior(&m.value("r").unwrap().intersection(m.value("s").unwrap())).unwrap()).unwrap();
    let in_original = f.components(&rs).unwrap().len();
    let in_sub = sub.frame().components(sub.value("r").unwrap()).unwrap().len();
    assert_eq!(in_original, in_sub);
    assert_eq!(subspace_model(&m, "nope").unwrap_err(), FrameError::UnknownVariable("nope".into()));
}

#[test]
fn model_validation() {
    let qs = f1();
    let f = qs.frame().clone();
    let bad = set(&f, &["z"]);
    let err = Model::new(f.clone(), BTreeMap::from([("r".into(), bad.clone())]), FrameClass::Regc).unwrap_err();
    assert_eq!(err.code(), "not_regular_closed");
    assert!(Model::new(f, BTreeMap::from([("r".into(), bad)]), FrameClass::All).is_ok());
    let forks = make_fork_frame(&[1, 1]).unwrap().into_frame();
    assert_eq!(Model::new(forks, BTreeMap::new(), FrameClass::Conregc).unwrap_err(), FrameError::Disconnected);
}

#[test]
fn fences() {
    let qs = QuasiSawFrame::from_named(
        &["i0", "i1", "i2"],
        &["p0", "p1"],
        &[("p0", "i0"), ("p0", "i1"), ("p1", "i1"), ("p1", "i2")],
    )
    .unwrap();
    let cells: Vec<String> = fence_cells(qs.frame()).unwrap().iter().map(|&c| qs.frame().name(c).to_string()).collect();
    assert!(cells == ["i0", "p0", "i1", "p1", "i2"] || cells == ["i2", "p1", "i1", "p0", "i0"]);
    let fork = make_fork_frame(&[3]).unwrap();
    assert_eq!(fence_cells(fork.frame()).unwrap_err().code(), "not_fence");
}

#[test]
fn json_round_trip() {
    let m = fig5();
    let text = m.to_json();
    let back = Model::from_json(&text).unwrap();
    assert_eq!(back.frame().names(), m.frame().names());
    assert_eq!(back.frame().strict_pairs(), m.frame().strict_pairs());
    assert_eq!(back.frame().set_names(back.value("r").unwrap()), m.frame().set_names(m.value("r").unwrap()));
    assert_eq!(back.class(), FrameClass::Regc);
}

#[test]
fn json_errors_carry_codes() {
    let partial = r#"{"frame":{"points":[{"id":"a","depth":0},{"id":"z"}],"edges":[]},"frame_class":"regc"}"#;
    assert_eq!(Model::from_json(partial).unwrap_err().code(), "partial_depths");
    let unknown = r#"{"frame":{"points":[{"id":"a"}],"edges":[["a","q"]]},"frame_class":"all"}"#;
    assert_eq!(Model::from_json(unknown).unwrap_err().code(), "unknown_point");
    assert_eq!(Model::from_json("{").unwrap_err().code(), "malformed_json");
    let generator = r#"{"frame":{"points":[{"id":"x"},{"id":"y"},{"id":"z"}],"edges":[["x","y"],["y","z"]]},"frame_class":"all","valuation":{"r":["z"]}}"#;
    let m = Model::from_json(generator).unwrap();
    assert!(m.frame().relates(0, 2));
}
