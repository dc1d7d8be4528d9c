use super::*;
use crate::formula::{classify, formula_to_string, parse, LanguageTag, Term};
use crate::frames::{FrameClass, Model, QuasiSawFrame};
use crate::semantics::holds;
use std::collections::BTreeMap;

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

fn show(f: &Formula) -> String {
    formula_to_string(f)
}

#[test]
fn rcc8_rewrites() {
    assert_eq!(rcc8_to_c(&p("DC(r1, r2)")), p("!C(r1, r2)"));
    assert_eq!(rcc8_to_c(&p("NTPP(r1, r2)")), p("!C(r1, -r2) & !(r2 <= r1)"));
    assert_eq!(rcc8_to_c(&p("EQ(r1, r1)")), p("r1 = r1"));
    assert_eq!(rcc8_to_c(&p("NTPPi(r1, r2)")), rcc8_to_c(&p("NTPP(r2, r1)")));
}

#[test]
fn dagger_examples() {
    assert_eq!(dagger(&p("r = 0")).unwrap(), p("cl(int(r)) = 0"));
    assert_eq!(dagger(&p("0 = 1")).unwrap(), p("0 = 1"));
    assert_eq!(dagger(&p("C(r1, r2)")).unwrap(), p("cl(int(r1)) ^ cl(int(r2)) != 0"));
    assert_eq!(classify(&dagger(&p("C(r1, -r2) | conn(r1 * r2)")).unwrap()).unwrap().base(), crate::formula::BaseLanguage::S4u);
    assert_eq!(dagger(&p("int(r) = 0")).unwrap_err().code(), "unsupported_language");
}

#[test]
fn eq_normalize_examples() {
    assert_eq!(eq_normalize(&p("r1 = r2")), p("r1 * -r2 + r2 * -r1 = 0"));
    assert!(matches!(eq_normalize(&p("r = 0")), Formula::Eq(_, Term::Zero)));
    let one_zero = eq_normalize(&p("1 = 0"));
    assert_eq!(one_zero, p("1 * -0 + 0 * -1 = 0"));
    let f1 = QuasiSawFrame::from_named(&["a", "b"], &["z"], &[("z", "a"), ("z", "b")]).unwrap();
    let m = Model::new(f1.into_frame(), BTreeMap::new(), FrameClass::Regc).unwrap();
    assert!(!holds(&m, &one_zero).unwrap());
}

#[test]
fn relativize_examples() {
    assert_eq!(relativize(&p("r = 0"), "s"), p("s * r = 0"));
    assert_eq!(relativize(&p("conn(r)"), "s"), p("conn(s * r)"));
    assert_eq!(relativize(&p("C(r1, r2)"), "s"), p("C(s * r1, s * r2)"));
}

#[test]
fn count_elimination_examples() {
    let f = p("conn_le(1, r)");
    let out = eliminate_count_pos(&f, None, CountMode::AtMost, &mut Fresh::new(&f).unwrap()).unwrap();
    assert_eq!(out, p("r = _aux1 & conn(_aux1)"));

    let g = p("conn_ge(2, r)");
    let out = eliminate_count_pos(&g, None, CountMode::AtLeast, &mut Fresh::new(&g).unwrap()).unwrap();
    assert_eq!(out, p("r = _aux1 v _aux2 & _aux1 != 0 & _aux2 != 0 & r ^ cl(_aux1) ^ cl(_aux2) = 0"));
    assert_eq!(out.vars().len(), 3);

    let h = p("conn_le(2, 0)");
    let out = eliminate_count_pos(&h, None, CountMode::AtMost, &mut Fresh::new(&h).unwrap()).unwrap();
    assert_eq!(out, p("0 = _aux1 v _aux2 & conn(_aux1) & conn(_aux2)"));
}

#[test]
fn count_elimination_refuses_wrong_polarity() {
    let f = p("!conn_le(2, r)");
    let err = eliminate_count_pos(&f, Some(0), CountMode::AtMost, &mut Fresh::new(&f).unwrap()).unwrap_err();
    assert_eq!(err, TransformError::NotPositive(0));
    let g = p("conn_le(2, r)");
    let err = eliminate_count_pos(&g, Some(0), CountMode::AtLeast, &mut Fresh::new(&g).unwrap()).unwrap_err();
    assert_eq!(err, TransformError::NotNegative(0));
    let rc = p("conn_le(2, r * s)");
    assert_eq!(
        eliminate_count_pos(&rc, None, CountMode::AtMost, &mut Fresh::new(&rc).unwrap()).unwrap_err().code(),
        "unsupported_language"
    );
}

#[test]
fn fresh_names_never_clash() {
    assert_eq!(Fresh::new(&p("_aux3 = 0")).unwrap_err(), TransformError::FreshCollision("_aux3".into()));
    assert_eq!(Fresh::after(&p("_aux3 = 0 & _aux10 = 0")).var(), "_aux11");
}

#[test]
fn positive_contact_elimination_shape() {
    let f = p("C(r1, r2)");
    let out = eliminate_contact_pos(&f, None, &mut Fresh::new(&f).unwrap()).unwrap();
    let expected = p(
        "!(0 = 0) | _aux1 = 0 & (_aux1 = 0 -> conn(_aux2 + _aux3) & _aux2 != 0 & _aux2 <= r1 & conn(_aux2) \
         & _aux3 != 0 & _aux3 <= r2 & conn(_aux3))",
    );
    assert_eq!(show(&out), show(&expected));
    assert_eq!(classify(&out), Some(LanguageTag::Bc));
}

#[test]
fn epsilon_tracks_the_empty_space() {
    let f = p("!C(r1, r2) | C(r1, r2) & r1 = 0");
    let out = eliminate_contact_pos(&f, None, &mut Fresh::new(&f).unwrap()).unwrap();
    match out {
        Formula::Or(eps, _) => assert_eq!(*eps, p("0 = 1")),
        other => panic!("unexpected shape {}", show(&other)),
    }
    assert_eq!(epsilon(&p("r != 0")), p("!(0 = 0)"));
}

#[test]
fn negative_contact_elimination_shape() {
    let f = p("!C(r1, r2)");
    let out = eliminate_contact_neg(&f, None, false, &mut Fresh::new(&f).unwrap()).unwrap();
    let expected = p(
        "0 = 1 | _aux1 != 0 & _aux1 * _aux2 = 0 & (_aux2 * _aux1 = 0 -> !conn(_aux3 + _aux4) & conn(_aux3) \
         & r1 * _aux1 <= _aux3 & conn(_aux4) & r2 * _aux1 <= _aux4)",
    );
    assert_eq!(show(&out), show(&expected));
    let connected = eliminate_contact_neg(&f, None, true, &mut Fresh::new(&f).unwrap()).unwrap();
    assert!(matches!(connected, Formula::And(_, ref c) if **c == p("conn(_aux1)")));
}

#[test]
fn negative_contact_under_implication() {
    let f = p("C(r1, r2) -> r1 = 0");
    let out = eliminate_contact_neg(&f, Some(0), false, &mut Fresh::new(&f).unwrap()).unwrap();
    assert!(show(&out).contains("_aux1 * _aux2 != 0 -> _aux1 * r1 = 0"), "{}", show(&out));
    assert_eq!(eliminate_contact_pos(&f, Some(0), &mut Fresh::new(&f).unwrap()).unwrap_err(), TransformError::NotPositive(0));
}

#[test]
fn pipeline_removes_every_contact() {
    for src in ["C(r1, r2) & !C(r1, -r2)", "EC(a, b) & NTPP(a, c)", "!C(r, -r) & r != 0 & 1 != r", "conn(r) & C(r, s)"] {
        let f = p(src);
        let out = eliminate_contacts(&f, false, &mut Fresh::new(&f).unwrap()).unwrap();
        let tag = classify(&out).unwrap();
        assert!(matches!(tag, LanguageTag::B | LanguageTag::Bc), "{src}: {tag}");
        assert!(out.size() <= 3 * f.size() + 120, "{src}: {} vs {}", out.size(), f.size());
    }
}

#[test]
fn fp_translation_examples() {
    assert_eq!(fp_translate(&p("r = 0")).unwrap().to_string(), "!F(P(!(r & false | !r & !false)))");
    assert_eq!(fp_translate(&p("conn(r)")).unwrap().to_string(), "!F(P(r & F(!r & F(r))))");
    let neg = fp_translate(&p("!(r = 0)")).unwrap();
    assert_eq!(neg.to_string(), format!("!{}", fp_translate(&p("r = 0")).unwrap()));
    assert_eq!(fp_translate(&p("C(r, s)")).unwrap_err().code(), "unsupported_language");
}

fn fence(n_intervals: usize, vals: &[(&str, &[usize])]) -> Model {
    let i_names: Vec<String> = (0..n_intervals).map(|i| format!("i{i}")).collect();
    let p_names: Vec<String> = (1..n_intervals).map(|i| format!("p{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n_intervals {
        edges.push((p_names[i - 1].clone(), i_names[i - 1].clone()));
        edges.push((p_names[i - 1].clone(), i_names[i].clone()));
    }
    let d0: Vec<&str> = i_names.iter().map(String::as_str).collect();
    let d1: Vec<&str> = p_names.iter().map(String::as_str).collect();
    let e: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let qs = QuasiSawFrame::from_named(&d0, &d1, &e).unwrap();
    let frame = qs.frame();
    let valuation = vals
        .iter()
        .map(|(v, support)| {
            let u = frame.set_from_points(support.iter().map(|&k| frame.point(&format!("i{k}")).unwrap()));
            (v.to_string(), qs.rc_from_support(&u).unwrap())
        })
        .collect();
    Model::new(qs.into_frame(), valuation, FrameClass::Fence).unwrap()
}

#[test]
fn fp_cell_semantics() {
    // Cells run i0 p1 i1 p2 i2.
    let fr = FpFormula::F(Box::new(FpFormula::Letter("r".into())));
    let m = fence(3, &[("r", &[2])]);
    let names: Vec<&str> = crate::frames::fence_cells(m.frame()).unwrap().iter().map(|&c| m.frame().name(c)).collect();
    assert_eq!(names, ["i0", "p1", "i1", "p2", "i2"]);
    assert!(fp_modelcheck(&m, &fr, 4).unwrap());
    assert!(fp_modelcheck(&m, &fr, 3).unwrap());
    let left = fence(3, &[("r", &[0])]);
    assert!(!fp_modelcheck(&left, &fr, 1).unwrap());
    assert!(fp_modelcheck(&left, &fr, 0).unwrap());
    assert_eq!(fp_modelcheck(&m, &fr, 9).unwrap_err(), TransformError::NoSuchCell(9));
    assert_eq!(fp_modelcheck(&m, &FpFormula::Letter("q".into()), 0).unwrap_err().code(), "unbound_letter");
}

#[test]
fn fp_correspondence_on_small_fences() {
    let formulas = ["conn(r)", "r = s", "conn(r + s) & !(r * s = 0)", "!conn(-r)", "r * s = 0 -> conn(r)"];
    for mask_r in 0u32..16 {
        for mask_s in [0u32, 3, 6, 9] {
            let r: Vec<usize> = (0..4).filter(|i| mask_r >> i & 1 == 1).collect();
            let s: Vec<usize> = (0..4).filter(|i| mask_s >> i & 1 == 1).collect();
            let m = fence(4, &[("r", &r), ("s", &s)]);
            for src in formulas {
                let f = p(src);
                let truth = holds(&m, &f).unwrap();
                let cells = fp_eval_cells(&m, &fp_translate(&f).unwrap()).unwrap();
                assert!(cells.iter().all(|&c| c == truth), "{src} r={r:?} s={s:?}");
            }
        }
    }
}
