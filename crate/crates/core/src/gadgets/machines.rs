use super::tiling::TileSet;
use super::tm::TuringMachine;
use super::tree::AlternatingTM;

/// Bundled deterministic machines by name.
pub const BUNDLED_MACHINES: &[(&str, &str)] = &[
    (
        // Accepts at once: steps from the accepting state to the halting one.
        "accept-now",
        r#"{"states":["qY","qH"],"initial":"qY","accepting":"qY","halting":"qH",
            "alphabet":["_"],"blank":"_","space":1,
            "delta":[["qY","_","qH","_",0]]}"#,
    ),
    (
        // Erases both cells and accepts every input.
        "accepter",
        r#"{"states":["q0","q1","qY","qH"],"initial":"q0","accepting":"qY","halting":"qH",
            "alphabet":["_","1"],"blank":"_","space":2,
            "delta":[["q0","1","q0","_",0],["q0","_","q1","_",1],
                     ["q1","1","q1","_",0],["q1","_","qY","_",-1],
                     ["qY","_","qH","_",0]]}"#,
    ),
    (
        // Moves to a dead state and never accepts.
        "rejecter",
        r#"{"states":["q0","qR","qY","qH"],"initial":"q0","accepting":"qY","halting":"qH",
            "alphabet":["_","1"],"blank":"_","space":1,
            "delta":[["q0","_","qR","_",0],["q0","1","qR","1",0],
                     ["qY","_","qH","_",0]]}"#,
    ),
    (
        // Alternates between two states forever on a leading 1; accepts the
        // empty word after checking the second cell.
        "looper",
        r#"{"states":["q0","p","q1","qY","qH"],"initial":"q0","accepting":"qY","halting":"qH",
            "alphabet":["_","1"],"blank":"_","space":2,
            "delta":[["q0","1","p","1",0],["p","1","q0","1",0],
                     ["q0","_","q1","_",1],["q1","_","qY","_",-1],["q1","1","qY","_",-1],
                     ["qY","_","qH","_",0]]}"#,
    ),
];

/// Bundled alternating machines by name.
pub const BUNDLED_ATMS: &[(&str, &str)] = &[
    (
        // Both branches reject immediately.
        "reject-now",
        r#"{"states":["q0","qY","qN"],"initial":"q0","accepting":"qY","rejecting":"qN",
            "alphabet":["_"],"blank":"_","space":1,"mode":{"q0":"exists"},
            "delta":[["q0","_","qN","_",0],["q0","_","qN","_",0]]}"#,
    ),
    (
        // Universal start: accepts iff the first cell holds 1.
        "forall-one",
        r#"{"states":["q0","qY","qN"],"initial":"q0","accepting":"qY","rejecting":"qN",
            "alphabet":["_","1"],"blank":"_","space":1,"mode":{"q0":"forall"},
            "delta":[["q0","_","qY","_",0],["q0","_","qN","_",0],
                     ["q0","1","qY","1",0],["q0","1","qY","1",0]]}"#,
    ),
];

/// Bundled tile sets by name.
pub const BUNDLED_TILESETS: &[(&str, &str)] = &[
    (
        "uniform",
        r#"{"tiles":[{"id":"T0","left":"c","top":"c","right":"c","bot":"c"}],"anchor":"T0","d":1}"#,
    ),
    (
        // Two tiles alternating in both directions over four colours.
        "checker",
        r#"{"tiles":[{"id":"A","left":"p","top":"r","right":"q","bot":"s"},
                     {"id":"B","left":"q","top":"s","right":"p","bot":"r"}],"anchor":"A","d":2}"#,
    ),
    (
        // Right edge never matches its own left edge.
        "mismatch",
        r#"{"tiles":[{"id":"T0","left":"a","top":"c","right":"b","bot":"c"}],"anchor":"T0","d":1}"#,
    ),
];

fn lookup<'a>(table: &[(&str, &'a str)], name: &str) -> Option<&'a str> {
    table.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

pub fn bundled_machine(name: &str) -> Option<TuringMachine> {
    lookup(BUNDLED_MACHINES, name).map(|j| TuringMachine::from_json(j).expect("bundled machine is valid"))
}

pub fn bundled_atm(name: &str) -> Option<AlternatingTM> {
    lookup(BUNDLED_ATMS, name).map(|j| AlternatingTM::from_json(j).expect("bundled machine is valid"))
}

pub fn bundled_tileset(name: &str) -> Option<TileSet> {
    lookup(BUNDLED_TILESETS, name).map(|j| TileSet::from_json(j).expect("bundled tile set is valid"))
}
