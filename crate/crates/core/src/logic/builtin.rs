//! Library of named formulas for the four reduction families and their helpers.
//!
//! Formulas are generated as text from the family conditions and parsed, so
//! every builtin round-trips through the public grammar. Helper predicates use
//! the free vertex variables `x` (and `y` when binary).

use super::parser::{parse, parse_with_free};
use super::{Formula, LogicError};

/// Colors of the stars and paths constructions.
pub mod stars_colors {
    pub const ROOT: &str = "C1";
    pub const VERTEX_BLOCK: &str = "C2";
    pub const EDGE_ROOT: &str = "C3";
    pub const EDGE_BLOCK: &str = "C4";
    pub const CONNECTOR: &str = "C5";
}

/// Colors of the twin cover construction.
pub mod twincover_colors {
    pub const VERTEX: &str = "C1";
    pub const ARC: &str = "C2";
    pub const DEMAND: &str = "C3";
    pub const SUPPLY: &str = "C4";
    pub const INDEX: &str = "C5";
    pub const RESERVOIR: &str = "C6";
}

/// Colors of the bandwidth construction.
pub mod bandwidth_colors {
    pub const CONNECTED_RAIL: &str = "C1";
    pub const DEMAND: &str = "C2";
    pub const SPACER: &str = "C3";
    pub const ISOLATED_RAIL: &str = "C4";
    pub const RESERVOIR: &str = "C5";
    pub const RUNG: &str = "C6";
    pub const TOKEN_BEARING: &str = "C7";
}

const MAX_DIST: usize = 6;

/// Fresh variable supply; the grammar forbids shadowing.
struct Names(usize);

impl Names {
    fn next(&mut self, stem: &str) -> String {
        self.0 += 1;
        format!("{stem}{}", self.0)
    }
}

fn any_color(colors: &[usize], x: &str) -> String {
    let parts: Vec<String> = colors.iter().map(|c| format!("C{c}({x})")).collect();
    format!("({})", parts.join(" | "))
}

/// `x` and `y` are joined by a path with at most `k` edges whose inner
/// vertices satisfy `keep` (any vertex when `keep` is `None`).
fn within(
    k: usize,
    x: &str,
    y: &str,
    keep: Option<&dyn Fn(&str) -> String>,
    names: &mut Names,
) -> String {
    if k == 0 {
        return format!("eq({x},{y})");
    }
    let z = names.next("w");
    let guard = keep.map(|f| format!(" & {}", f(&z))).unwrap_or_default();
    let rest = within(k - 1, &z, y, keep, names);
    format!("(eq({x},{y}) | exists {z}. (E({x},{z}){guard} & {rest}))")
}

/// Exact shortest-path distance `k` (inner vertices restricted by `keep`).
fn dist(
    k: usize,
    x: &str,
    y: &str,
    keep: Option<&dyn Fn(&str) -> String>,
    names: &mut Names,
) -> String {
    if k == 0 {
        return format!("eq({x},{y})");
    }
    let near = within(k, x, y, keep, names);
    let nearer = within(k - 1, x, y, keep, names);
    format!("({near} & ~{nearer})")
}

fn col367(x: &str) -> String {
    any_color(&[3, 6, 7], x)
}

fn dist_in(k: usize, x: &str, y: &str, names: &mut Names) -> String {
    dist(k, x, y, Some(&col367), names)
}

/// `x` and `y` lie in one component of the subgraph induced by colors 3, 6, 7.
fn con367(x: &str, y: &str, names: &mut Names) -> String {
    let s = names.next("S");
    let (z, u, v) = (names.next("z"), names.next("u"), names.next("v"));
    format!(
        "(eq({x},{y}) | ({cx} & {cy} & ~(existsS {s}. ({s}({x}) & ~{s}({y}) & (forall {z}. ({s}({z}) -> {cz})) & \
         (forall {u}. forall {v}. (({s}({u}) & {cu} & E({u},{v}) & {cv}) -> {s}({v})))))))",
        cx = col367(x),
        cy = col367(y),
        cz = col367(&z),
        cu = col367(&u),
        cv = col367(&v),
    )
}

/// `x` is a token-free orange node at in-component distance four from the black node `y`.
fn ctfc6(x: &str, y: &str, names: &mut Names) -> String {
    format!(
        "(C7({x}) & ~X({x}) & C6({y}) & {})",
        dist_in(4, x, y, names)
    )
}

/// All uncolored neighbors of `p` are empty (`full = false`) or occupied.
fn leaves(p: &str, full: bool, colored: &dyn Fn(&str) -> String, names: &mut Names) -> String {
    let z = names.next("z");
    let lit = if full {
        format!("X({z})")
    } else {
        format!("~X({z})")
    };
    format!(
        "(forall {z}. ((E({p},{z}) & ~{c}) -> {lit}))",
        c = colored(&z)
    )
}

fn stars_colored(x: &str) -> String {
    any_color(&[1, 2, 3, 4, 5], x)
}

fn paths_colored(x: &str) -> String {
    any_color(&[2, 4, 5], x)
}

/// For every `block`-colored node, exactly one adjacent `root` has all leaves
/// in state `chosen` and every other adjacent `root` has all leaves in the
/// opposite state.
fn exactly_one_root(block: &str, root: &str, chosen_full: bool, names: &mut Names) -> String {
    let (t, p, q) = (names.next("t"), names.next("p"), names.next("q"));
    let mine = leaves(&p, chosen_full, &stars_colored, names);
    let others = leaves(&q, !chosen_full, &stars_colored, names);
    format!(
        "forall {t}. ({block}({t}) -> exists {p}. ({root}({p}) & E({t},{p}) & {mine} & \
         forall {q}. (({root}({q}) & E({t},{q}) & ~eq({q},{p})) -> {others})))"
    )
}

fn s1(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. ({} -> ~X({x}))", stars_colored(&x))
}

fn s2(names: &mut Names) -> String {
    exactly_one_root(stars_colors::VERTEX_BLOCK, stars_colors::ROOT, false, names)
}

fn s3(names: &mut Names) -> String {
    exactly_one_root(
        stars_colors::EDGE_BLOCK,
        stars_colors::EDGE_ROOT,
        true,
        names,
    )
}

fn p1(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. ({} -> ~X({x}))", paths_colored(&x))
}

fn p_block(block: &str, occupied: bool, names: &mut Names) -> String {
    let (t, p) = (names.next("t"), names.next("p"));
    let lit = if occupied {
        format!("X({p})")
    } else {
        format!("~X({p})")
    };
    format!(
        "forall {t}. ({block}({t}) -> exists {p}. (E({t},{p}) & ~{} & {lit}))",
        paths_colored(&p)
    )
}

fn p2(names: &mut Names) -> String {
    p_block(stars_colors::VERTEX_BLOCK, false, names)
}

fn p3(names: &mut Names) -> String {
    p_block(stars_colors::EDGE_BLOCK, true, names)
}

fn p4(names: &mut Names) -> String {
    let (x, z, y) = (names.next("x"), names.next("z"), names.next("y"));
    let u = |v: &str| format!("~{}", paths_colored(v));
    let near = format!(
        "(eq({x},{z}) | E({x},{z}) | exists {y}. ({uy} & E({x},{y}) & E({y},{z})))",
        uy = u(&y)
    );
    format!(
        "forall {x}. ({ux} -> (X({x}) <-> forall {z}. (({uz} & {near}) -> X({z}))))",
        ux = u(&x),
        uz = u(&z)
    )
}

fn t1(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. (C3({x}) -> X({x}))")
}

fn t2(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. (C6({x}) -> ~X({x}))")
}

/// The supply clique of orange node `o` has its teal nodes full and its orange
/// nodes empty (`active`), or the reverse.
fn clique_state(o: &str, active: bool, names: &mut Names) -> String {
    let (z1, z2) = (names.next("z"), names.next("z"));
    let (orange, teal) = if active { ("~X", "X") } else { ("X", "~X") };
    format!(
        "({orange}({o}) & (forall {z1}. ((E({o},{z1}) & C4({z1})) -> {orange}({z1}))) & \
         (forall {z2}. ((E({o},{z2}) & C5({z2})) -> {teal}({z2}))))"
    )
}

fn t3(names: &mut Names) -> String {
    let (p, a, o0, o, o2) = (
        names.next("p"),
        names.next("a"),
        names.next("o"),
        names.next("o"),
        names.next("o"),
    );
    let active = clique_state(&o, true, names);
    let dormant = clique_state(&o2, false, names);
    format!(
        "forall {p}. forall {a}. ((C1({p}) & C2({a}) & exists {o0}. (C4({o0}) & E({p},{o0}) & E({a},{o0}))) -> \
         exists {o}. (C4({o}) & E({p},{o}) & E({a},{o}) & {active} & \
         forall {o2}. ((C4({o2}) & E({p},{o2}) & E({a},{o2}) & ~eq({o},{o2}) & ~E({o},{o2})) -> {dormant})))"
    )
}

fn t4(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. ((C1({x}) | C2({x})) -> ~X({x}))")
}

fn b1(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. ((C3({x}) | C1({x}) | C5({x})) -> ~X({x}))")
}

fn b2(names: &mut Names) -> String {
    let x = names.next("x");
    format!("forall {x}. (C2({x}) -> X({x}))")
}

fn b3(names: &mut Names) -> String {
    let (x, y) = (names.next("x"), names.next("y"));
    let d = dist(5, &x, &y, None, names);
    format!("forall {x}. (C4({x}) -> (X({x}) <-> exists {y}. (C7({y}) & ~X({y}) & {d})))")
}

fn b4(names: &mut Names) -> String {
    let (x, y) = (names.next("x"), names.next("y"));
    let d = dist_in(4, &x, &y, names);
    format!("forall {x}. (C7({x}) -> forall {y}. ((C7({y}) & {d}) -> (X({x}) <-> X({y}))))")
}

fn b5(names: &mut Names) -> String {
    let x = names.next("x");
    let (y1, u1, y2, u2) = (
        names.next("y"),
        names.next("u"),
        names.next("y"),
        names.next("u"),
    );
    let (v, w) = (names.next("v"), names.next("w"));
    let f1 = ctfc6(&y1, &u1, names);
    let f2 = ctfc6(&y2, &u2, names);
    let d6 = dist_in(6, &u1, &u2, names);
    let cons: Vec<String> = [&y1, &u1, &y2, &u2]
        .iter()
        .map(|t| con367(&x, t, names))
        .collect();
    let cv = con367(&x, &v, names);
    let fw = ctfc6(&w, &v, names);
    format!(
        "forall {x}. ((C6({x}) | C7({x})) -> exists {y1}. exists {u1}. exists {y2}. exists {u2}. \
         ({f1} & {f2} & ~eq({y1},{y2}) & ~eq({u1},{u2}) & {d6} & {cons} & \
         forall {v}. ((C6({v}) & {cv} & exists {w}. {fw}) -> (eq({v},{u1}) | eq({v},{u2})))))",
        cons = cons.join(" & ")
    )
}

fn conj(parts: &[fn(&mut Names) -> String]) -> String {
    let mut names = Names(0);
    let texts: Vec<String> = parts
        .iter()
        .map(|p| format!("({})", p(&mut names)))
        .collect();
    texts.join(" & ")
}

/// Text of a named formula and the free vertex variables it uses.
pub fn builtin_text(name: &str) -> Result<(String, &'static [&'static str]), LogicError> {
    let mut names = Names(0);
    let sentence = |parts: &[fn(&mut Names) -> String]| Ok((conj(parts), &[][..]));
    let single = |f: fn(&mut Names) -> String| Ok((f(&mut Names(0)), &[][..]));
    match name {
        "S_STARS" => sentence(&[s1, s2, s3]),
        "P_PATHS" => sentence(&[p1, p2, p3, p4]),
        "T_TWINCOVER" => sentence(&[t1, t2, t3, t4]),
        "B_BANDWIDTH" => sentence(&[b1, b2, b3, b4, b5]),
        "S1" => single(s1),
        "S2" => single(s2),
        "S3" => single(s3),
        "P1" => single(p1),
        "P2" => single(p2),
        "P3" => single(p3),
        "P4" => single(p4),
        "T1" => single(t1),
        "T2" => single(t2),
        "T3" => single(t3),
        "T4" => single(t4),
        "B1" => single(b1),
        "B2" => single(b2),
        "B3" => single(b3),
        "B4" => single(b4),
        "B5" => single(b5),
        "COL_S" => Ok((stars_colored("x"), &["x"])),
        "COL_P" => Ok((paths_colored("x"), &["x"])),
        "COL_T" => Ok((any_color(&[1, 2, 3, 4, 5, 6], "x"), &["x"])),
        "COL_367" => Ok((col367("x"), &["x"])),
        "CON_367" => Ok((con367("x", "y", &mut names), &["x", "y"])),
        "CTFC6" => Ok((ctfc6("x", "y", &mut names), &["x", "y"])),
        _ => {
            let parsed = |prefix: &str| {
                name.strip_prefix(prefix)
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k <= MAX_DIST)
            };
            if let Some(k) = parsed("DIST_") {
                Ok((dist(k, "x", "y", None, &mut names), &["x", "y"]))
            } else if let Some(k) = parsed("DISTIN_") {
                Ok((dist_in(k, "x", "y", &mut names), &["x", "y"]))
            } else {
                Err(LogicError::UnknownName(name.to_string()))
            }
        }
    }
}

/// Parsed named formula. Family names yield sentences in `X`; helpers have
/// free vertex variables `x` and possibly `y`.
pub fn builtin(name: &str) -> Result<Formula, LogicError> {
    let (text, free) = builtin_text(name)?;
    if free.is_empty() {
        parse(&text)
    } else {
        parse_with_free(&text, free)
    }
}

/// Every accepted builtin name.
pub fn builtin_names() -> Vec<String> {
    let fixed = [
        "S_STARS",
        "P_PATHS",
        "T_TWINCOVER",
        "B_BANDWIDTH",
        "S1",
        "S2",
        "S3",
        "P1",
        "P2",
        "P3",
        "P4",
        "T1",
        "T2",
        "T3",
        "T4",
        "B1",
        "B2",
        "B3",
        "B4",
        "B5",
        "COL_S",
        "COL_P",
        "COL_T",
        "COL_367",
        "CON_367",
        "CTFC6",
    ];
    let mut out: Vec<String> = fixed.iter().map(|s| s.to_string()).collect();
    for k in 0..=MAX_DIST {
        out.push(format!("DIST_{k}"));
        out.push(format!("DISTIN_{k}"));
    }
    out
}

/// Names of the per-condition formulas of a family, in order.
pub fn family_conditions(family: &str) -> Option<&'static [&'static str]> {
    Some(match family {
        "S_STARS" => &["S1", "S2", "S3"],
        "P_PATHS" => &["P1", "P2", "P3", "P4"],
        "T_TWINCOVER" => &["T1", "T2", "T3", "T4"],
        "B_BANDWIDTH" => &["B1", "B2", "B3", "B4", "B5"],
        _ => return None,
    })
}
