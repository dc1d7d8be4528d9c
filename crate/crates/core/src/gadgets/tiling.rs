use super::tm::TileType;
use super::GadgetError;
use crate::formula::{var, Formula, Term};
use crate::frames::{FrameClass, Model, QuasiSawFrame};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// Tiles, the tile required at the origin, and the grid exponent `d`
/// (the grid is `2^d x 2^d`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSet {
    pub tiles: Vec<TileType>,
    pub anchor: String,
    pub d: u32,
}

/// Tile index per cell, indexed `[y][x]` with `y = 0` the bottom row.
pub type Tiling = Vec<Vec<usize>>;

impl TileSet {
    pub fn from_json(text: &str) -> Result<Self, GadgetError> {
        let t: TileSet = serde_json::from_str(text).map_err(|e| GadgetError::Json(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tile set serialises")
    }

    /// Index of the anchor tile.
    pub fn validate(&self) -> Result<usize, GadgetError> {
        if self.tiles.is_empty() {
            return Err(GadgetError::MalformedTileSet("no tiles".into()));
        }
        if !(1..=16).contains(&self.d) {
            return Err(GadgetError::MalformedTileSet("d must lie in 1..=16".into()));
        }
        let mut seen = HashSet::new();
        for t in &self.tiles {
            if !seen.insert(&t.id) {
                return Err(GadgetError::MalformedTileSet(format!("duplicate tile id '{}'", t.id)));
            }
        }
        self.tiles
            .iter()
            .position(|t| t.id == self.anchor)
            .ok_or_else(|| GadgetError::UnknownAnchor(self.anchor.clone()))
    }

    pub fn side(&self) -> usize {
        1 << self.d
    }

    /// Check `f` against the matching rules and the anchor.
    pub fn check_tiling(&self, f: &Tiling) -> Result<(), GadgetError> {
        let anchor = self.validate()?;
        let n = self.side();
        let bad = |m: String| Err(GadgetError::InvalidTiling(m));
        if f.len() != n || f.iter().any(|row| row.len() != n) {
            return bad(format!("expected a {n}x{n} grid"));
        }
        if f.iter().flatten().any(|&k| k >= self.tiles.len()) {
            return bad("tile index out of range".into());
        }
        if f[0][0] != anchor {
            return bad("the origin does not carry the anchor tile".into());
        }
        for y in 0..n {
            for x in 0..n {
                let t = &self.tiles[f[y][x]];
                if x + 1 < n && t.right != self.tiles[f[y][x + 1]].left {
                    return bad(format!("horizontal mismatch at ({x}, {y})"));
                }
                if y + 1 < n && t.top != self.tiles[f[y + 1][x]].bot {
                    return bad(format!("vertical mismatch at ({x}, {y})"));
                }
            }
        }
        Ok(())
    }
}

/// Independent backtracking tiler over the `2^d x 2^d` grid.
pub fn brute_force_tiling(ts: &TileSet) -> Result<Option<Tiling>, GadgetError> {
    let anchor = ts.validate()?;
    let n = ts.side();
    let mut grid = vec![vec![usize::MAX; n]; n];
    fn go(ts: &TileSet, grid: &mut Tiling, cell: usize, n: usize, anchor: usize) -> bool {
        if cell == n * n {
            return true;
        }
        let (x, y) = (cell % n, cell / n);
        for k in 0..ts.tiles.len() {
            if cell == 0 && k != anchor {
                continue;
            }
            let t = &ts.tiles[k];
            if x > 0 && ts.tiles[grid[y][x - 1]].right != t.left {
                continue;
            }
            if y > 0 && ts.tiles[grid[y - 1][x]].top != t.bot {
                continue;
            }
            grid[y][x] = k;
            if go(ts, grid, cell + 1, n, anchor) {
                return true;
            }
        }
        grid[y][x] = usize::MAX;
        false
    }
    Ok(go(ts, &mut grid, 0, n, anchor).then_some(grid))
}

fn v(name: String) -> Term {
    var(&name)
}
fn h(l: usize) -> Term {
    v(format!("H{l}"))
}
fn vv(l: usize) -> Term {
    v(format!("V{l}"))
}
fn bit(axis: char, j: u32) -> Term {
    v(format!("{axis}{j}"))
}
fn tile(k: usize) -> Term {
    v(format!("T{k}"))
}
fn g() -> Term {
    var("G")
}
fn neg(t: Term) -> Term {
    Term::compl(t)
}
fn no_contact(a: Term, b: Term) -> Formula {
    Formula::not(Formula::contact(a, b))
}

/// The counter value `n` on the bits of `axis`.
fn number(axis: char, n: u64, d: u32) -> Term {
    Term::prod_all((1..=d).rev().map(|j| if n >> (j - 1) & 1 == 1 { bit(axis, j) } else { neg(bit(axis, j)) }))
}

/// Counter constraints making `axis` increase by one across each step of the
/// direction triple `dir`.
fn counter(parts: &mut Vec<Formula>, axis: char, dir: fn(usize) -> Term, d: u32) {
    parts.push(Formula::eq(Term::sum_all((0..3).map(dir)), Term::One));
    for l in 0..3 {
        parts.push(Formula::is_zero(Term::prod(dir(l), dir((l + 1) % 3))));
    }
    let next = |l: usize| dir((l + 1) % 3);
    for l in 0..3 {
        for k in 1..=d {
            parts.push(no_contact(Term::prod(bit(axis, k), dir(l)), Term::prod(neg(bit(axis, k)), dir(l))));
        }
        for j in 1..=d {
            for k in 1..j {
                parts.push(no_contact(
                    Term::prod_all([bit(axis, j), neg(bit(axis, k)), dir(l)]),
                    Term::prod(neg(bit(axis, j)), next(l)),
                ));
                parts.push(no_contact(
                    Term::prod_all([neg(bit(axis, j)), neg(bit(axis, k)), dir(l)]),
                    Term::prod(bit(axis, j), next(l)),
                ));
            }
        }
        // Lowest zero bit k flips to one; the bits below it reset.
        for k in 1..=d {
            let low = Term::prod_all(
                std::iter::once(neg(bit(axis, k))).chain((1..k).rev().map(|i| bit(axis, i))).chain([dir(l)]),
            );
            parts.push(no_contact(low.clone(), Term::prod(neg(bit(axis, k)), next(l))));
            for i in 1..k {
                parts.push(no_contact(low.clone(), Term::prod(bit(axis, i), next(l))));
            }
        }
        let full = Term::prod_all((1..=d).rev().map(|j| bit(axis, j)).chain([dir(l)]));
        parts.push(no_contact(full, next(l)));
    }
}

/// Formula satisfiable iff the tile set tiles the `2^d x 2^d` grid with the
/// anchor at the origin.
pub fn gen_tiling_formula(ts: &TileSet) -> Result<Formula, GadgetError> {
    let anchor = ts.validate()?;
    let d = ts.d;
    let top = (1u64 << d) - 1;
    let mut parts = Vec::new();
    counter(&mut parts, 'X', h, d);
    counter(&mut parts, 'Y', vv, d);
    let (x1, y1) = (bit('X', 1), bit('Y', 1));
    parts.push(no_contact(
        Term::prod_all([g(), x1.clone(), y1.clone()]),
        Term::prod_all([g(), neg(x1.clone()), neg(y1.clone())]),
    ));
    parts.push(no_contact(
        Term::prod_all([g(), neg(x1.clone()), y1.clone()]),
        Term::prod_all([g(), x1.clone(), neg(y1.clone())]),
    ));
    let (x0, y0) = (number('X', 0, d), number('Y', 0, d));
    let (xt, yt) = (number('X', top, d), number('Y', top, d));
    parts.push(Formula::nonzero(Term::prod_all([g(), x0.clone(), y0.clone()])));
    parts.push(Formula::nonzero(Term::prod_all([g(), xt.clone(), yt.clone()])));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(x0.clone(), yt))));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(xt, y0.clone()))));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(neg(x1.clone()), y0.clone()))));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(x1.clone(), y0.clone()))));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(x0.clone(), neg(y1.clone())))));
    parts.push(Formula::conn(Term::prod(g(), Term::sum(x0.clone(), y1.clone()))));
    let black = Term::sum(Term::prod(x1.clone(), neg(y1.clone())), Term::prod(neg(x1.clone()), y1.clone()));
    let white = Term::sum(Term::prod(neg(x1.clone()), neg(y1.clone())), Term::prod(x1, y1));
    // One component per square of each colour.
    let squares = 1u64 << (2 * d - 1);
    parts.push(Formula::conn_le(squares, black));
    parts.push(Formula::conn_le(squares, white));
    let n = ts.tiles.len();
    parts.push(Formula::eq(Term::sum_all((0..n).map(tile)), g()));
    for k1 in 0..n {
        for k2 in k1 + 1..n {
            parts.push(Formula::is_zero(Term::prod(tile(k1), tile(k2))));
        }
    }
    for l in 0..3 {
        for l2 in 0..3 {
            for k1 in 0..n {
                for k2 in k1 + 1..n {
                    parts.push(no_contact(
                        Term::prod_all([h(l), vv(l2), tile(k1)]),
                        Term::prod_all([h(l), vv(l2), tile(k2)]),
                    ));
                }
            }
        }
    }
    for l in 0..3 {
        for (k1, t1) in ts.tiles.iter().enumerate() {
            for (k2, t2) in ts.tiles.iter().enumerate() {
                if t1.right != t2.left {
                    parts.push(no_contact(Term::prod(h(l), tile(k1)), Term::prod(h((l + 1) % 3), tile(k2))));
                }
                if t1.top != t2.bot {
                    parts.push(no_contact(Term::prod(vv(l), tile(k1)), Term::prod(vv((l + 1) % 3), tile(k2))));
                }
            }
        }
    }
    parts.push(Formula::le(Term::prod(x0, y0), tile(anchor)));
    Ok(Formula::and_all(parts))
}

/// Grid quasi-saw for a tiling: a depth-0 point `c{x}_{y}` per cell and a
/// hub per pair of horizontally (`h{x}_{y}`) or vertically (`v{x}_{y}`)
/// adjacent cells.
pub fn gen_tiling_witness(ts: &TileSet, f: &Tiling) -> Result<Model, GadgetError> {
    ts.check_tiling(f)?;
    let n = ts.side();
    let mut names = Vec::new();
    let mut depth = Vec::new();
    let cell = |x: usize, y: usize| y * n + x;
    for y in 0..n {
        for x in 0..n {
            names.push(format!("c{x}_{y}"));
            depth.push(0);
        }
    }
    let mut edges = Vec::new();
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n {
                edges.push((names.len(), cell(x, y)));
                edges.push((names.len(), cell(x + 1, y)));
                names.push(format!("h{x}_{y}"));
                depth.push(1);
            }
            if y + 1 < n {
                edges.push((names.len(), cell(x, y)));
                edges.push((names.len(), cell(x, y + 1)));
                names.push(format!("v{x}_{y}"));
                depth.push(1);
            }
        }
    }
    let qs = QuasiSawFrame::build(names, depth, &edges)?;
    let frame = qs.frame();
    let mut valuation = BTreeMap::new();
    let mut put = |name: String, pred: &dyn Fn(usize, usize) -> bool| -> Result<(), GadgetError> {
        let pts = (0..n * n).filter(|&c| pred(c % n, c / n));
        valuation.insert(name, qs.rc_from_support(&frame.set_from_points(pts))?);
        Ok(())
    };
    for l in 0..3 {
        put(format!("H{l}"), &|x, _| x % 3 == l)?;
        put(format!("V{l}"), &|_, y| y % 3 == l)?;
    }
    for j in 1..=ts.d {
        put(format!("X{j}"), &|x, _| x >> (j - 1) & 1 == 1)?;
        put(format!("Y{j}"), &|_, y| y >> (j - 1) & 1 == 1)?;
    }
    put("G".into(), &|_, _| true)?;
    for k in 0..ts.tiles.len() {
        put(format!("T{k}"), &|x, y| f[y][x] == k)?;
    }
    Ok(Model::new(qs.into_frame(), valuation, FrameClass::Regc)?)
}
