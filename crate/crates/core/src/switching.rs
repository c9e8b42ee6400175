//! The fifteen coloured switchings on the relaxed family `G0`, their
//! trigger thresholds, the priority rule and the nominal `a_c`/`b_c` ledger.
//!
//! Each colour is a [`Template`]: a number of vertex slots plus a list of
//! cell rules. A rule names a cell (two slots, or one slot twice for a
//! loop), a condition on its multiplicity before the switching and the
//! change the switching makes to it. Forward moves are injective slot
//! assignments satisfying every rule; reverse moves are the same search on
//! the image with each condition shifted by its delta.
//!
//! Move counting conventions, matching the ordered sequences below:
//!
//! | colour | sequence                         | ordered choices                                    |
//! |--------|----------------------------------|----------------------------------------------------|
//! | 1, 2   | `(v1, v2)`                       | ordered pairs of qualifying loops, `[L]_2`          |
//! | 3      | `(v1, v2, v3)`                   | ordered triples of simple loops                    |
//! | 4, 5   | `(v1, w1, v2, w2)`               | ordered pair of classes, each oriented (`4[E]_2`)   |
//! | 4+j    | `(v1, w1, .., vj, wj)`           | ordered `j` classes, each oriented (`2^j [e_j]_j`)  |
//! | 9      | `(v0, v1, w1, v2, w2)`           | loop, then two ordered oriented simple links       |
//! | 10     | `(v0, v1, w1, .., v3, w3)`       | loop, then three ordered oriented simple links     |
//! | 11     | `(v0, w0, v1, w1, .., v3, w3)`   | oriented heavy link, three oriented simple links   |
//! | 12     | `(v0, w0, v1, w1, .., v5, w5)`   | oriented heavy link, five oriented simple links    |
//! | 13     | `(v0, v1, v2)`                   | loop, one oriented simple link                     |
//! | 14     | `(v0, w0, v1, w1, v2, w2)`       | oriented double link, two oriented simple links    |
//! | 15     | `(v0, w0, v1, w1, .., v3, w3)`   | oriented triple link, three oriented simple links  |
//!
//! Colour 12 joins `v0` to each `vj` and `w0` to each `wj`, like colours 11
//! and 15; joining `v0` to both ends would not preserve degrees.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_rational, ceil_root, ceil_sqrt, ratio, rational_to_f64};
use crate::degree::{DegreeSequence, Multigraph, MultiplicitySet};
use crate::error::{Error, Result};
use crate::exact::g0_sets;

pub const COLOURS: std::ops::RangeInclusive<u8> = 1..=15;

/// Thresholds and trigger levels derived from a degree sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    pub m: u64,
    pub kmax: u32,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub sqrt_m: u64,
    pub m56: u64,
    pub cap4: u32,
    /// `⌈kmax^{1/2}⌉`, the top of the colour-5 multiplicity range.
    pub sqrt_kmax: u32,
    /// `⌈3 M^{1/2}⌉`, trigger for colours 1 and 2.
    pub three_sqrt_m: u64,
    /// `⌈4 kmax^{1/2} M^{1/2}⌉`, trigger for colour 4.
    pub four_sqrt_kmax_m: u64,
    /// `⌈3 kmax M^{1/2}⌉`, trigger for colour 5.
    pub three_kmax_sqrt_m: u64,
}

impl Thresholds {
    pub fn new(k: &DegreeSequence) -> Self {
        let m = k.total();
        let kmax = k.kmax();
        let log_m = if m <= 1 { 0 } else { (m as f64).ln().ceil() as u64 };
        let ceil_ratio = |num: BigUint, den: BigUint| -> u64 {
            if den.is_zero() {
                return 0;
            }
            let q = ratio(num, den);
            ceil_rational(&q).to_u64().unwrap_or(u64::MAX)
        };
        let mb = BigUint::from(m);
        let m2 = k.moment(2).clone();
        let m3 = k.moment(3).clone();
        let n1 = log_m.max(ceil_ratio(&m2 * 480u32, mb.clone()));
        let n2 = log_m.max(ceil_ratio(&m2 * &m2 * 240u32, mb.pow(2)));
        let n3 = log_m.max(ceil_ratio(&m3 * &m3 * 240u32, mb.pow(3)));
        let mu = u128::from(m);
        let ku = u128::from(kmax);
        let sqrt_kmax = ceil_sqrt(ku) as u32;
        Thresholds {
            m,
            kmax,
            n1,
            n2,
            n3,
            sqrt_m: ceil_sqrt(mu) as u64,
            m56: ceil_root(&mb.pow(5), 6).to_u64().unwrap_or(u64::MAX),
            cap4: sqrt_kmax.max(4),
            sqrt_kmax,
            three_sqrt_m: ceil_sqrt(9 * mu) as u64,
            four_sqrt_kmax_m: ceil_sqrt(16 * ku * mu) as u64,
            three_kmax_sqrt_m: ceil_sqrt(9 * ku * ku * mu) as u64,
        }
    }
}

/// Loop and link tallies of a multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultStats {
    /// `ℓ_D`: loops of multiplicity `D ≥ 1`.
    pub ell: BTreeMap<u32, u64>,
    /// `e_D`: links of multiplicity `D ≥ 1`.
    pub e: BTreeMap<u32, u64>,
    /// Loops of multiplicity 2 or at least 4.
    pub big_l: u64,
    pub e_plus: u64,
    pub e_minus: u64,
    /// `e_4 + Σ_{D ≥ 7} e_D`.
    pub big_e: u64,
    #[serde(serialize_with = "ser_rational")]
    pub e1_fraction: BigRational,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl MultStats {
    pub fn loops(&self, d: u32) -> u64 {
        self.ell.get(&d).copied().unwrap_or(0)
    }

    pub fn links(&self, d: u32) -> u64 {
        self.e.get(&d).copied().unwrap_or(0)
    }

    /// Membership test for `Z` (given membership of `G0`).
    pub fn in_z(&self, th: &Thresholds) -> bool {
        self.ell.keys().all(|&d| d == 1)
            && self.e.keys().all(|&d| d <= 3)
            && self.loops(1) <= th.n1.div_ceil(2)
            && self.links(2) <= th.n2.div_ceil(2)
            && self.links(3) <= th.n3.div_ceil(2)
    }

    /// Membership test for `Y` (given membership of `G0`).
    pub fn in_y(&self, th: &Thresholds) -> bool {
        !(self.ell.keys().all(|&d| d == 1)
            && self.e.keys().all(|&d| d <= 3)
            && self.loops(1) <= th.n1
            && self.links(2) <= th.n2
            && self.links(3) <= th.n3)
    }
}

pub fn stats(q: &Multigraph) -> MultStats {
    let kmax = q.degrees().into_iter().max().unwrap_or(0);
    let sqrt_kmax = ceil_sqrt(u128::from(kmax)) as u32;
    let cap4 = sqrt_kmax.max(4);
    let mut ell = BTreeMap::new();
    let mut e = BTreeMap::new();
    let mut total = 0u64;
    for i in 0..q.n() {
        let a = q.loop_mult(i);
        total += 2 * u64::from(a);
        if a > 0 {
            *ell.entry(a).or_insert(0u64) += 1;
        }
        for j in i + 1..q.n() {
            let a = q.get(i, j);
            total += 2 * u64::from(a);
            if a > 0 {
                *e.entry(a).or_insert(0u64) += 1;
            }
        }
    }
    let count = |map: &BTreeMap<u32, u64>, f: &dyn Fn(u32) -> bool| -> u64 {
        map.iter().filter(|(&d, _)| f(d)).map(|(_, &c)| c).sum()
    };
    let e1 = e.get(&1).copied().unwrap_or(0);
    let e1_fraction = if total == 0 {
        BigRational::zero()
    } else {
        ratio(2 * e1, total)
    };
    MultStats {
        big_l: count(&ell, &|d| d == 2 || d >= 4),
        e_plus: count(&e, &|d| d > cap4 && d <= kmax),
        e_minus: count(&e, &|d| d >= 5 && d <= sqrt_kmax),
        big_e: count(&e, &|d| d == 4 || d >= 7),
        ell,
        e,
        e1_fraction,
    }
}

/// The instance a multigraph is switched within: its degree sequence, the
/// original multiplicity sets and the thresholds.
#[derive(Clone, Debug)]
pub struct SwitchContext {
    pub degrees: DegreeSequence,
    pub j: MultiplicitySet,
    pub jstar: MultiplicitySet,
    pub thresholds: Thresholds,
    g0_links: MultiplicitySet,
    g0_loops: MultiplicitySet,
}

impl SwitchContext {
    pub fn new(degrees: DegreeSequence, j: MultiplicitySet, jstar: MultiplicitySet) -> Self {
        let thresholds = Thresholds::new(&degrees);
        let (g0_links, g0_loops) = g0_sets(&j, &jstar);
        SwitchContext {
            degrees,
            j,
            jstar,
            thresholds,
            g0_links,
            g0_loops,
        }
    }

    pub fn in_g0(&self, q: &Multigraph) -> bool {
        self.check_g0(q).is_ok()
    }

    pub fn check_g0(&self, q: &Multigraph) -> Result<()> {
        if q.degrees() != self.degrees.degrees() {
            return Err(Error::NotInG0(format!(
                "degrees {:?} differ from {:?}",
                q.degrees(),
                self.degrees.degrees()
            )));
        }
        if let Some((a, b, v)) = q.first_violation(&self.g0_links, &self.g0_loops) {
            let what = if a == b { "loop" } else { "link" };
            return Err(Error::NotInG0(format!(
                "{what} ({},{}) has multiplicity {v}",
                a + 1,
                b + 1
            )));
        }
        Ok(())
    }

    /// The least colour whose trigger holds, or `None` when `q ∈ Z`.
    pub fn active_colour(&self, q: &Multigraph) -> Result<Option<u8>> {
        self.check_g0(q)?;
        Ok(active_colour_of(&stats(q), &self.thresholds))
    }
}

/// Priority rule on precomputed statistics. `Z` is checked first: at small
/// `M` the caps defining `Z` can exceed the colour 3 and 6–8 triggers.
pub fn active_colour_of(s: &MultStats, th: &Thresholds) -> Option<u8> {
    if s.in_z(th) {
        return None;
    }
    let triggers: [(u8, bool); 15] = [
        (1, s.big_l > th.three_sqrt_m),
        (2, s.loops(3) > th.three_sqrt_m),
        (3, s.loops(1) > th.sqrt_m),
        (4, s.e_plus > th.four_sqrt_kmax_m),
        (5, s.e_minus > th.three_kmax_sqrt_m),
        (6, s.links(2) > th.m56),
        (7, s.links(3) > th.m56),
        (8, s.links(4) > th.m56),
        (9, s.big_l >= 1),
        (10, s.loops(3) >= 1),
        (11, s.big_e >= 1),
        (12, s.links(5) + s.links(6) >= 1),
        (13, s.loops(1) > th.n1.div_ceil(2)),
        (14, s.links(2) > th.n2.div_ceil(2)),
        (15, s.links(3) > th.n3.div_ceil(2)),
    ];
    triggers.iter().find(|(_, hit)| *hit).map(|(c, _)| *c)
}

// ---------------------------------------------------------------------------
// Templates.

/// Condition on a multiplicity. Bounds are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cond {
    Any,
    Exactly(u32),
    Between(u32, u32),
    /// Exactly `a` or at least `b`.
    EqOrAtLeast(u32, u32),
}

impl Cond {
    pub fn holds(self, x: u32) -> bool {
        match self {
            Cond::Any => true,
            Cond::Exactly(a) => x == a,
            Cond::Between(lo, hi) => lo <= x && x <= hi,
            Cond::EqOrAtLeast(a, b) => x == a || x >= b,
        }
    }

    fn shifted(self, delta: i32) -> Cond {
        let sh = |x: u32| {
            if x == u32::MAX {
                u32::MAX
            } else {
                (i64::from(x) + i64::from(delta)).max(0) as u32
            }
        };
        match self {
            Cond::Any => {
                if delta > 0 {
                    Cond::Between(delta as u32, u32::MAX)
                } else {
                    Cond::Any
                }
            }
            Cond::Exactly(a) => Cond::Exactly(sh(a)),
            Cond::Between(lo, hi) => Cond::Between(sh(lo), sh(hi)),
            Cond::EqOrAtLeast(a, b) => Cond::EqOrAtLeast(sh(a), sh(b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellRule {
    pub a: usize,
    pub b: usize,
    pub before: Cond,
    pub delta: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub colour: u8,
    pub slots: usize,
    pub rules: Vec<CellRule>,
}

fn rule(a: usize, b: usize, before: Cond, delta: i32) -> CellRule {
    CellRule { a, b, before, delta }
}

/// Hub colours: a central loop at slot 0 (`hub_is_link = false`) or a central
/// link between slots 0 and 1, plus `pairs` simple links broken up.
fn hub_template(colour: u8, centre: CellRule, hub_is_link: bool, pairs: usize) -> Template {
    let base = if hub_is_link { 2 } else { 1 };
    let mut rules = vec![centre];
    for p in 0..pairs {
        let (v, w) = (base + 2 * p, base + 2 * p + 1);
        rules.push(rule(v, w, Cond::Exactly(1), -1));
        if hub_is_link {
            rules.push(rule(0, v, Cond::Exactly(0), 1));
            rules.push(rule(1, w, Cond::Exactly(0), 1));
        } else {
            rules.push(rule(0, v, Cond::Exactly(0), 1));
            rules.push(rule(0, w, Cond::Exactly(0), 1));
        }
    }
    Template {
        colour,
        slots: base + 2 * pairs,
        rules,
    }
}

pub fn template(colour: u8, th: &Thresholds) -> Template {
    const MAX: u32 = u32::MAX;
    let t = |slots, rules| Template { colour, slots, rules };
    match colour {
        1 => t(
            2,
            vec![
                rule(0, 0, Cond::EqOrAtLeast(2, 4), -2),
                rule(1, 1, Cond::EqOrAtLeast(2, 4), -2),
                rule(0, 1, Cond::Any, 4),
            ],
        ),
        2 => t(
            2,
            vec![
                rule(0, 0, Cond::Exactly(3), -3),
                rule(1, 1, Cond::Exactly(3), -3),
                rule(0, 1, Cond::Any, 6),
            ],
        ),
        3 => t(
            3,
            vec![
                rule(0, 0, Cond::Exactly(1), -1),
                rule(1, 1, Cond::Exactly(1), -1),
                rule(2, 2, Cond::Exactly(1), -1),
                rule(0, 1, Cond::Exactly(0), 1),
                rule(0, 2, Cond::Exactly(0), 1),
                rule(1, 2, Cond::Exactly(0), 1),
            ],
        ),
        4 | 5 => {
            let heavy = if colour == 4 {
                Cond::Between(th.cap4 + 1, MAX)
            } else {
                Cond::Between(5, th.sqrt_kmax)
            };
            t(
                4,
                vec![
                    rule(0, 1, heavy, -1),
                    rule(2, 3, heavy, -1),
                    rule(0, 2, Cond::Exactly(0), 1),
                    rule(1, 3, Cond::Exactly(0), 1),
                ],
            )
        }
        6..=8 => {
            let j = usize::from(colour - 4);
            let mut rules = Vec::new();
            for r in 0..j {
                rules.push(rule(2 * r, 2 * r + 1, Cond::Exactly(j as u32), 1 - j as i32));
            }
            for r in 0..j {
                for s in 0..j {
                    if r != s {
                        let (a, b) = (2 * r, 2 * s + 1);
                        rules.push(rule(a.min(b), a.max(b), Cond::Exactly(0), 1));
                    }
                }
            }
            t(2 * j, rules)
        }
        9 => hub_template(9, rule(0, 0, Cond::EqOrAtLeast(2, 4), -2), false, 2),
        10 => hub_template(10, rule(0, 0, Cond::Exactly(3), -3), false, 3),
        11 => hub_template(11, rule(0, 1, Cond::EqOrAtLeast(4, 7), -3), true, 3),
        12 => hub_template(12, rule(0, 1, Cond::Between(5, 6), -5), true, 5),
        13 => hub_template(13, rule(0, 0, Cond::Exactly(1), -1), false, 1),
        14 => hub_template(14, rule(0, 1, Cond::Exactly(2), -2), true, 2),
        15 => hub_template(15, rule(0, 1, Cond::Exactly(3), -3), true, 3),
        _ => panic!("colour {colour} out of range"),
    }
}

impl Template {
    /// The template run backwards: conditions on the image, negated deltas.
    pub fn inverse(&self) -> Template {
        Template {
            colour: self.colour,
            slots: self.slots,
            rules: self
                .rules
                .iter()
                .map(|r| rule(r.a, r.b, r.before.shifted(r.delta), -r.delta))
                .collect(),
        }
    }

    /// Rules whose later slot is `s`, so they can be checked once `s` is set.
    fn rules_closing_at(&self) -> Vec<Vec<CellRule>> {
        let mut out = vec![Vec::new(); self.slots];
        for r in &self.rules {
            out[r.a.max(r.b)].push(*r);
        }
        out
    }

    /// For each slot, an earlier slot it must be linked to, if any.
    fn anchors(&self) -> Vec<Option<usize>> {
        (0..self.slots)
            .map(|s| {
                self.rules.iter().find_map(|r| {
                    let (lo, hi) = (r.a.min(r.b), r.a.max(r.b));
                    (hi == s && lo < s && !r.before.holds(0)).then_some(lo)
                })
            })
            .collect()
    }

    pub fn matches(&self, q: &Multigraph, seq: &[usize]) -> bool {
        seq.len() == self.slots
            && seq.iter().all(|&v| v < q.n())
            && seq.iter().collect::<BTreeSet<_>>().len() == seq.len()
            && self.rules.iter().all(|r| r.before.holds(q.get(seq[r.a], seq[r.b])))
    }

    pub fn apply_unchecked(&self, q: &Multigraph, seq: &[usize]) -> Multigraph {
        let mut r = q.clone();
        for cr in &self.rules {
            let (a, b) = (seq[cr.a], seq[cr.b]);
            let v = i64::from(r.get(a, b)) + i64::from(cr.delta);
            r.set(a, b, v as u32);
        }
        r
    }

    /// Visits every injective slot assignment satisfying the rules.
    pub fn for_each_match<F: FnMut(&[usize])>(&self, q: &Multigraph, mut f: F) {
        let closing = self.rules_closing_at();
        let anchors = self.anchors();
        let mut seq = Vec::with_capacity(self.slots);
        let mut used = vec![false; q.n()];
        self.extend(q, &closing, &anchors, &mut seq, &mut used, &mut f);
    }

    fn extend<F: FnMut(&[usize])>(
        &self,
        q: &Multigraph,
        closing: &[Vec<CellRule>],
        anchors: &[Option<usize>],
        seq: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut F,
    ) {
        let s = seq.len();
        if s == self.slots {
            f(seq);
            return;
        }
        let candidates: Vec<usize> = match anchors[s] {
            Some(a) => q.neighbours(seq[a]).collect(),
            None => (0..q.n()).collect(),
        };
        for v in candidates {
            if used[v] {
                continue;
            }
            seq.push(v);
            let ok = closing[s]
                .iter()
                .all(|r| r.before.holds(q.get(seq[r.a], seq[r.b])));
            if ok {
                used[v] = true;
                self.extend(q, closing, anchors, seq, used, f);
                used[v] = false;
            }
            seq.pop();
        }
    }
}

// ---------------------------------------------------------------------------
// Moves.

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchingMove {
    pub colour: u8,
    /// 0-based vertex indices.
    pub seq: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MoveJson {
    colour: u8,
    seq: Vec<usize>,
}

impl Serialize for SwitchingMove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MoveJson {
            colour: self.colour,
            seq: self.seq.iter().map(|v| v + 1).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SwitchingMove {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MoveJson::deserialize(d)?;
        if raw.seq.contains(&0) {
            return Err(serde::de::Error::custom("vertex ids are 1-based"));
        }
        Ok(SwitchingMove {
            colour: raw.colour,
            seq: raw.seq.into_iter().map(|v| v - 1).collect(),
        })
    }
}

fn check_colour(c: u8) -> Result<()> {
    if COLOURS.contains(&c) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("colour {c} is not in 1..=15")))
    }
}

/// Every structurally valid move of colour `c`, ignoring the priority rule.
pub fn moves_of_colour(q: &Multigraph, c: u8, th: &Thresholds) -> Vec<SwitchingMove> {
    let mut out = Vec::new();
    template(c, th).for_each_match(q, |seq| {
        out.push(SwitchingMove {
            colour: c,
            seq: seq.to_vec(),
        })
    });
    out
}

pub fn count_moves(q: &Multigraph, c: u8, th: &Thresholds) -> u64 {
    let mut n = 0u64;
    template(c, th).for_each_match(q, |_| n += 1);
    n
}

/// Moves of colour `c` on `q`, which must be the active colour.
pub fn enumerate_moves(ctx: &SwitchContext, q: &Multigraph, c: u8) -> Result<Vec<SwitchingMove>> {
    check_colour(c)?;
    let active = ctx.active_colour(q)?;
    if active != Some(c) {
        return Err(Error::WrongColour {
            requested: c,
            active,
        });
    }
    Ok(moves_of_colour(q, c, &ctx.thresholds))
}

pub fn apply_move(q: &Multigraph, m: &SwitchingMove, th: &Thresholds) -> Result<Multigraph> {
    check_colour(m.colour)?;
    let t = template(m.colour, th);
    if m.seq.len() != t.slots {
        return Err(Error::InvalidMove(format!(
            "colour {} takes {} vertices, got {}",
            m.colour,
            t.slots,
            m.seq.len()
        )));
    }
    if !t.matches(q, &m.seq) {
        return Err(Error::InvalidMove(format!(
            "sequence {:?} does not satisfy the colour {} conditions",
            m.seq.iter().map(|v| v + 1).collect::<Vec<_>>(),
            m.colour
        )));
    }
    Ok(t.apply_unchecked(q, &m.seq))
}

/// Every `(Q, move)` of colour `c` with `apply_move(Q, move) = r`, ignoring
/// both `G0` membership of `Q` and the priority rule.
pub fn structural_preimages(r: &Multigraph, c: u8, th: &Thresholds) -> Vec<(Multigraph, SwitchingMove)> {
    let inv = template(c, th).inverse();
    let mut out = Vec::new();
    inv.for_each_match(r, |seq| {
        out.push((
            inv.apply_unchecked(r, seq),
            SwitchingMove {
                colour: c,
                seq: seq.to_vec(),
            },
        ))
    });
    out
}

/// Preimages `(Q, move)` of `r` with `Q ∈ G0` and colour `c` active at `Q`.
pub fn preimages(ctx: &SwitchContext, r: &Multigraph, c: u8) -> Vec<(Multigraph, SwitchingMove)> {
    structural_preimages(r, c, &ctx.thresholds)
        .into_iter()
        .filter(|(q, _)| matches!(ctx.active_colour(q), Ok(Some(a)) if a == c))
        .collect()
}

pub fn reverse_count(ctx: &SwitchContext, r: &Multigraph, c: u8) -> Result<BigUint> {
    check_colour(c)?;
    Ok(BigUint::from(preimages(ctx, r, c).len()))
}

// ---------------------------------------------------------------------------
// Nominal bounds.

/// An exact rational, or a real where the nominal value is irrational.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(BigRational),
    Real(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(q) => rational_to_f64(q),
            Quantity::Real(x) => *x,
        }
    }

    fn div(&self, other: &Quantity) -> Quantity {
        match (self, other) {
            (Quantity::Exact(a), Quantity::Exact(b)) => Quantity::Exact(a / b),
            _ => Quantity::Real(self.to_f64() / other.to_f64()),
        }
    }

    fn scale(&self, by: u32) -> Quantity {
        match self {
            Quantity::Exact(a) => Quantity::Exact(a * BigRational::from_integer(by.into())),
            Quantity::Real(x) => Quantity::Real(x * f64::from(by)),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(q) => s.serialize_str(&q.to_string()),
            Quantity::Real(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NominalBounds {
    pub colour: u8,
    pub a: Quantity,
    pub b: Quantity,
    pub alpha: Quantity,
    pub hat_alpha: Quantity,
}

/// `a_c(Q)`, `b_c(R)`, `α = b_c/a_c` and `α̂ = 15 α`. `b_4` is stored as
/// `2 kmax² M / cap4²`, which never exceeds the rounder `2 kmax M`.
pub fn nominal_bounds(c: u8, k: &DegreeSequence, s: &MultStats) -> Result<NominalBounds> {
    check_colour(c)?;
    let th = Thresholds::new(k);
    let int = |x: BigUint| BigRational::from_integer(x.into());
    let m = int(BigUint::from(k.total()));
    let kmax = int(BigUint::from(k.kmax()));
    let mom = |r: usize| int(k.moment(r).clone());
    let half = ratio(1, 2);
    let mf = k.total() as f64;
    let need = |stat: u64, name: &'static str| -> Result<BigRational> {
        if stat == 0 {
            Err(Error::ZeroDenominator {
                colour: c,
                statistic: name,
            })
        } else {
            Ok(int(BigUint::from(stat)))
        }
    };
    if k.total() == 0 {
        return Err(Error::ZeroDenominator {
            colour: c,
            statistic: "M",
        });
    }
    let pow = |x: &BigRational, e: i32| x.pow(e);
    let exact = Quantity::Exact;
    let (a, b) = match c {
        1 => (exact(&m * int(9u32.into())), exact(&m / int(4u32.into()))),
        2 => (exact(&m * int(9u32.into())), exact(&m / int(6u32.into()))),
        3 => (Quantity::Real(0.5 * mf.powf(1.5)), exact(&kmax * &m)),
        4 => {
            let cap = int(BigUint::from(th.cap4));
            (
                exact(int(60u32.into()) * &kmax * &m),
                exact(int(2u32.into()) * pow(&kmax, 2) * &m / pow(&cap, 2)),
            )
        }
        5 => (
            exact(int(30u32.into()) * pow(&kmax, 2) * &m),
            exact(pow(&kmax, 2) * &m),
        ),
        6..=8 => {
            let j = i32::from(c - 4);
            (
                Quantity::Real(0.5 * mf.powf(5.0 * f64::from(j) / 6.0)),
                exact(pow(&kmax, 2 * j - 2) * &m),
            )
        }
        9 => (exact(&half * need(s.big_l, "L")? * pow(&m, 2)), exact(mom(4))),
        10 => (exact(&half * need(s.loops(3), "ell_3")? * pow(&m, 3)), exact(mom(6))),
        11 => (exact(need(s.big_e, "E")? * pow(&m, 3)), exact(pow(&kmax, 3) * mom(4))),
        12 => (
            exact(need(s.links(5) + s.links(6), "e_5+e_6")? * pow(&m, 5)),
            exact(pow(&mom(5), 2)),
        ),
        13 => (exact(&half * need(s.loops(1), "ell_1")? * &m), exact(mom(2))),
        14 => (exact(need(s.links(2), "e_2")? * pow(&m, 2)), exact(pow(&mom(2), 2))),
        15 => (exact(need(s.links(3), "e_3")? * pow(&m, 3)), exact(pow(&mom(3), 2))),
        _ => unreachable!(),
    };
    let alpha = b.div(&a);
    let hat_alpha = alpha.scale(15);
    Ok(NominalBounds {
        colour: c,
        a,
        b,
        alpha,
        hat_alpha,
    })
}
