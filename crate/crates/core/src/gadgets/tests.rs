use super::*;
use crate::formula::{classify, parse, print, Formula, LanguageTag};
use crate::semantics::{count_components, holds};
use crate::formula::var;

fn word(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

fn conn_atoms(f: &Formula) -> usize {
    let mut n = 0;
    f.visit_atoms(&mut |a| {
        if matches!(a, Formula::Conn(_)) {
            n += 1
        }
    });
    n
}

fn round_trips(f: &Formula) {
    assert_eq!(&parse(&print(f)).unwrap(), f);
}

#[test]
fn tm_tile_and_variable_counts() {
    for (name, _) in BUNDLED_MACHINES {
        let m = bundled_machine(name).unwrap();
        let tiles = m.tiles().unwrap();
        let expected_tiles = 2 * m.alphabet.len() + 2 * m.alphabet.len() * m.states.len() + m.delta.len();
        assert_eq!(tiles.len(), expected_tiles, "{name}");
        let f = gen_tm_formula(&m, &[]).unwrap();
        assert_eq!(f.vars().len(), 3 + m.space * tiles.len(), "{name}");
        assert_eq!(classify(&f), Some(LanguageTag::C), "{name}");
        round_trips(&f);
    }
}

#[test]
fn tm_runs_match_expectations() {
    let accepter = bundled_machine("accepter").unwrap();
    for input in ["", "1", "11", "_1"] {
        assert!(accepter.accepting_run(&word(input)).unwrap().is_some(), "{input:?}");
    }
    let rejecter = bundled_machine("rejecter").unwrap();
    assert!(rejecter.accepting_run(&[]).unwrap().is_none());
    let looper = bundled_machine("looper").unwrap();
    assert!(looper.accepting_run(&[]).unwrap().is_some());
    assert!(looper.accepting_run(&word("1")).unwrap().is_none());
}

#[test]
fn tm_witnesses_model_check() {
    for (name, input) in [("accept-now", ""), ("accepter", ""), ("accepter", "11"), ("looper", "")] {
        let m = bundled_machine(name).unwrap();
        let run = m.accepting_run(&word(input)).unwrap().unwrap();
        let f = gen_tm_formula(&m, &word(input)).unwrap();
        let w = gen_tm_witness(&m, &word(input), &run).unwrap();
        // One interval cell per step and a boundary point between neighbours.
        assert_eq!(w.frame().len(), 2 * (run.len() - 1) - 1, "{name}");
        assert!(holds(&w, &f).unwrap(), "{name} on {input:?}");
    }
}

#[test]
fn accept_now_run_has_one_step() {
    let m = bundled_machine("accept-now").unwrap();
    let run = m.accepting_run(&[]).unwrap().unwrap();
    assert_eq!(run.len(), 2);
    let w = gen_tm_witness(&m, &[], &run).unwrap();
    assert!(holds(&w, &gen_tm_formula(&m, &[]).unwrap()).unwrap());
}

#[test]
fn tm_witness_rejects_bad_runs() {
    let m = bundled_machine("accepter").unwrap();
    let mut run = m.accepting_run(&word("1")).unwrap().unwrap();
    run.swap(0, 1);
    assert_eq!(gen_tm_witness(&m, &word("1"), &run).unwrap_err().code(), "invalid_run");
}

#[test]
fn malformed_machines_are_rejected() {
    let cases = [
        r#"{"states":["q"],"initial":"q","accepting":"q","halting":"q","alphabet":["_"],"blank":"_","space":1,"delta":[]}"#,
        r#"{"states":["qY","qH"],"initial":"qY","accepting":"qY","halting":"qH","alphabet":["_"],"blank":"_","space":1,"delta":[]}"#,
        r#"{"states":["qY","qH"],"initial":"qY","accepting":"qY","halting":"qH","alphabet":["_"],"blank":"_","space":1,"delta":[["qY","_","qH","_",2]]}"#,
    ];
    for c in cases {
        assert_eq!(TuringMachine::from_json(c).unwrap_err().code(), "malformed_machine", "{c}");
    }
    assert_eq!(TuringMachine::from_json("{").unwrap_err().code(), "malformed_json");
}

#[test]
fn input_longer_than_space_is_rejected() {
    let m = bundled_machine("accept-now").unwrap();
    assert_eq!(gen_tm_formula(&m, &word("__")).unwrap_err().code(), "bad_input");
}

#[test]
fn modal_parser_round_trip() {
    let m = parse_modal("[1]p & <2>!q -> p | q").unwrap();
    assert_eq!(parse_modal(&m.to_string()).unwrap(), m);
    assert_eq!(parse_modal("[3]p").unwrap_err().code(), "malformed_modal");
    assert_eq!(parse_modal("(p & q").unwrap_err().code(), "malformed_modal");
}

#[test]
fn tree_formula_shape() {
    let chi = parse_modal("[1]p & [2]!p").unwrap();
    let psi = parse_modal("p").unwrap();
    let f = gen_tree_formula(&chi, &psi).unwrap();
    assert_eq!(conn_atoms(&f), 2);
    assert_eq!(classify(&f), Some(LanguageTag::Cc));
    let closure = super::modal::closure(&chi, &psi);
    let boxes = closure.iter().filter(|x| matches!(x, Modal::Box(..))).count();
    assert_eq!(f.vars().len(), closure.len() + 2 * boxes + 15);
    // The initial successor seeding and the anchor are conjuncts.
    let parts = conjuncts(&f);
    for i in [1, 2] {
        assert!(parts.contains(&Formula::le(var(&format!("s0_{}", 2 * i)), var("s1_0"))));
    }
    round_trips(&f);
}

fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conjuncts(a);
            v.extend(conjuncts(b));
            v
        }
        other => vec![other.clone()],
    }
}

#[test]
fn tree_formula_size_is_linear() {
    // Output size stays under a fixed affine function of the input size.
    let mut sizes = Vec::new();
    for n in 1..=6 {
        let mut chi = Modal::var("p0");
        for i in 1..n {
            chi = Modal::and(Modal::boxed(1 + (i % 2) as u8, chi), Modal::var(&format!("p{i}")));
        }
        let psi = Modal::not(Modal::var("p0"));
        let f = gen_tree_formula(&chi, &psi).unwrap();
        let input = chi.to_string().len() + psi.to_string().len();
        sizes.push((input, f.size()));
    }
    for &(input, size) in &sizes {
        assert!(size <= 30 * input + 600, "{sizes:?}");
    }
}

#[test]
fn reject_now_tree_witness() {
    let m = bundled_atm("reject-now").unwrap();
    assert!(!m.accepts(&[]).unwrap());
    let tree = m.computation_tree(&[]).unwrap();
    assert_eq!(tree.nodes.len(), 3);
    let (chi, psi) = atm_modal_pair(&m, &[]).unwrap();
    let w = gen_tree_witness(&tree, &chi, &psi).unwrap();
    assert_eq!(w.frame().len(), 35);
    assert!(w.frame().is_connected());
    let f = gen_atm_formula(&m, &[]).unwrap();
    assert_eq!(conn_atoms(&f), 2);
    assert_eq!(classify(&f), Some(LanguageTag::Cc));
    assert!(holds(&w, &f).unwrap());
    // Saw cells two or more apart never touch.
    for j in 0..2 {
        for k in 0..=6 {
            for k2 in k + 2..=6 {
                let c = Formula::contact(var(&format!("s{j}_{k}")), var(&format!("s{j}_{k2}")));
                assert!(!holds(&w, &c).unwrap());
            }
        }
    }
}

#[test]
fn single_node_tree_witness() {
    let chi = parse_modal("p").unwrap();
    let psi = parse_modal("!p").unwrap();
    let tree = LabeledBinaryTree { nodes: vec![TreeNode { children: None, labels: ["p".to_string()].into() }] };
    let w = gen_tree_witness(&tree, &chi, &psi).unwrap();
    assert_eq!(w.frame().len(), 13);
    assert!(holds(&w, &gen_atm_formula_for(&chi, &psi)).unwrap());
}

fn gen_atm_formula_for(chi: &Modal, psi: &Modal) -> Formula {
    // With no guards the successor seeding is vacuous.
    super::tree::build_guarded(chi, psi, &[]).unwrap()
}

#[test]
fn forall_machine_accepts_only_on_one() {
    let m = bundled_atm("forall-one").unwrap();
    assert!(m.accepts(&word("1")).unwrap());
    assert!(!m.accepts(&[]).unwrap());
    let tree = m.computation_tree(&[]).unwrap();
    let (chi, psi) = atm_modal_pair(&m, &[]).unwrap();
    let w = gen_tree_witness(&tree, &chi, &psi).unwrap();
    assert!(holds(&w, &gen_atm_formula(&m, &[]).unwrap()).unwrap());
    let accepting = m.computation_tree(&word("1")).unwrap();
    let (chi1, psi1) = atm_modal_pair(&m, &word("1")).unwrap();
    assert_eq!(gen_tree_witness(&accepting, &chi1, &psi1).unwrap_err().code(), "inconsistent_labelling");
}

#[test]
fn tiling_counts_and_classes() {
    for (name, _) in BUNDLED_TILESETS {
        let ts = bundled_tileset(name).unwrap();
        let f = gen_tiling_formula(&ts).unwrap();
        let d = ts.d as usize;
        assert_eq!(f.vars().len(), 6 + 2 * d + 1 + ts.tiles.len(), "{name}");
        assert_eq!(classify(&f), Some(LanguageTag::Ccc), "{name}");
        round_trips(&f);
    }
}

#[test]
fn tiling_witnesses_agree_with_brute_force() {
    for (name, tilable) in [("uniform", true), ("checker", true), ("mismatch", false)] {
        let ts = bundled_tileset(name).unwrap();
        let found = brute_force_tiling(&ts).unwrap();
        assert_eq!(found.is_some(), tilable, "{name}");
        if let Some(t) = found {
            ts.check_tiling(&t).unwrap();
            let w = gen_tiling_witness(&ts, &t).unwrap();
            let side = ts.side();
            assert_eq!(w.frame().depths().unwrap().iter().filter(|&&d| d == 0).count(), side * side);
            assert!(holds(&w, &gen_tiling_formula(&ts).unwrap()).unwrap(), "{name}");
        }
    }
}

#[test]
fn uniform_tiling_chessboard_components() {
    let ts = bundled_tileset("uniform").unwrap();
    let t = brute_force_tiling(&ts).unwrap().unwrap();
    let w = gen_tiling_witness(&ts, &t).unwrap();
    assert_eq!(w.frame().len(), 8);
    // Diagonal squares of one colour never touch, so each is a component.
    let x = var("X1");
    let y = var("Y1");
    let black = crate::formula::Term::sum(
        crate::formula::Term::prod(x.clone(), y.clone()),
        crate::formula::Term::prod(crate::formula::Term::compl(x), crate::formula::Term::compl(y)),
    );
    assert_eq!(count_components(&w, &black).unwrap(), 2);
}

#[test]
fn tiling_errors() {
    let mut ts = bundled_tileset("uniform").unwrap();
    ts.anchor = "nope".into();
    assert_eq!(gen_tiling_formula(&ts).unwrap_err().code(), "unknown_anchor");
    let ts = bundled_tileset("mismatch").unwrap();
    assert_eq!(gen_tiling_witness(&ts, &vec![vec![0, 0], vec![0, 0]]).unwrap_err().code(), "invalid_tiling");
    assert_eq!(TileSet::from_json(r#"{"tiles":[],"anchor":"T0","d":0}"#).unwrap_err().code(), "malformed_tileset");
}

#[test]
fn bundled_specs_round_trip_through_json() {
    for (name, _) in BUNDLED_MACHINES {
        let m = bundled_machine(name).unwrap();
        assert_eq!(TuringMachine::from_json(&m.to_json()).unwrap(), m);
    }
    for (name, _) in BUNDLED_ATMS {
        let m = bundled_atm(name).unwrap();
        assert_eq!(AlternatingTM::from_json(&m.to_json()).unwrap(), m);
    }
    for (name, _) in BUNDLED_TILESETS {
        let t = bundled_tileset(name).unwrap();
        assert_eq!(TileSet::from_json(&t.to_json()).unwrap(), t);
    }
}

#[test]
fn corpus_is_well_formed() {
    let entries = corpus();
    assert!(entries.len() >= 15);
    let mut names: Vec<_> = entries.iter().map(|e| e.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), entries.len());
    for e in &entries {
        round_trips(&e.formula);
        if e.expected == Expected::Sat {
            let w = e.witness.as_ref().unwrap_or_else(|| panic!("{} lacks a witness", e.name));
            assert!(holds(w, &e.formula).unwrap(), "{}", e.name);
        }
    }
}

#[test]
fn split_region_witness_has_two_components() {
    let e = corpus().into_iter().find(|e| e.name == "split-region-minimal").unwrap();
    let w = e.witness.unwrap();
    assert_eq!(w.frame().len(), 5);
    assert_eq!(count_components(&w, &var("r")).unwrap(), 2);
}
