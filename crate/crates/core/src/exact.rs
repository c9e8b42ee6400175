//! Exact, arbitrary-precision counting of symmetric integer matrices with
//! prescribed weighted row sums.
//!
//! Two independent strategies are provided. [`Strategy::Backtracking`] fills
//! the upper triangle cell by cell in row-major order and counts leaves; it
//! also drives [`enumerate_multigraphs`]. [`Strategy::RowDp`] settles one
//! vertex at a time and memoises on the sorted residual degrees of the
//! unsettled vertices. The two share nothing beyond the allowed-value sets.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::degree::{DegreeSequence, Multigraph, MultiplicitySet};
use crate::error::{Error, Result};
use crate::switching::Thresholds;

pub const DEFAULT_BUDGET: u64 = 20_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Strategy {
    Backtracking,
    #[default]
    RowDp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::RowDp,
        }
    }
}

impl CountOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        CountOptions {
            strategy,
            ..Default::default()
        }
    }
}

/// `(ℓ, d, t)`: simple loops, double links and triple links of a multigraph
/// with no loop of multiplicity ≥ 2 and no link of multiplicity ≥ 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ClassSignature {
    pub ell: u32,
    pub d: u32,
    pub t: u32,
}

impl ClassSignature {
    pub fn new(ell: u32, d: u32, t: u32) -> Self {
        ClassSignature { ell, d, t }
    }

    /// The signature of `g`, or `None` if `g` has a loop of multiplicity ≥ 2
    /// or a link of multiplicity ≥ 4.
    pub fn of(g: &Multigraph) -> Option<Self> {
        let mut sig = ClassSignature::default();
        for i in 0..g.n() {
            match g.loop_mult(i) {
                0 => {}
                1 => sig.ell += 1,
                _ => return None,
            }
            for j in i + 1..g.n() {
                match g.get(i, j) {
                    0 | 1 => {}
                    2 => sig.d += 1,
                    3 => sig.t += 1,
                    _ => return None,
                }
            }
        }
        Some(sig)
    }
}

/// Counts split by [`ClassSignature`].
pub type Census = BTreeMap<ClassSignature, BigUint>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "G0")]
    G0,
    #[serde(rename = "G0_minus_Y")]
    G0MinusY,
    #[serde(rename = "Z")]
    Z,
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G0" | "g0" => Ok(Region::G0),
            "G0_minus_Y" | "G0-Y" | "g0-y" => Ok(Region::G0MinusY),
            "Z" | "z" => Ok(Region::Z),
            other => Err(Error::Parse(format!("unknown region {other:?}"))),
        }
    }
}

/// Number of symmetric matrices with diagonal in `jstar`, off-diagonal in
/// `j` and weighted row sums `k`. Only even total degree is required; the
/// support conditions of the asymptotic formulas are not.
pub fn count_exact(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
) -> Result<BigUint> {
    count_exact_with(k, j, jstar, CountOptions::default())
}

pub fn count_exact_with(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    opts: CountOptions,
) -> Result<BigUint> {
    k.check_even()?;
    match opts.strategy {
        Strategy::Backtracking => {
            let mut leaves = 0u64;
            let mut search = CellSearch::new(k, jstar, j, opts.budget);
            search.run(&mut |_| {
                leaves += 1;
                ControlFlow::Continue(())
            })?;
            Ok(BigUint::from(leaves))
        }
        Strategy::RowDp => RowDp::<BigUint>::new(jstar, j, opts.budget).solve(k.degrees()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enumeration {
    pub graphs: Vec<Multigraph>,
    pub truncated: bool,
}

/// Every member of the family, in lexicographic order of the upper
/// triangle read row by row, stopping after `cap` items.
pub fn enumerate_multigraphs(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    cap: usize,
) -> Result<Enumeration> {
    let mut graphs = Vec::new();
    let mut truncated = false;
    for_each_multigraph(k, j, jstar, DEFAULT_BUDGET, |g| {
        if graphs.len() == cap {
            truncated = true;
            return ControlFlow::Break(());
        }
        graphs.push(g.clone());
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration { graphs, truncated })
}

/// Streams every member to `visit` until it returns `Break`.
pub fn for_each_multigraph<F>(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    budget: u64,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&Multigraph) -> ControlFlow<()>,
{
    k.check_even()?;
    let mut search = CellSearch::new(k, jstar, j, budget);
    search.run(&mut |m| {
        let g = Multigraph::from_matrix(m.to_vec()).expect("search builds symmetric matrices");
        visit(&g)
    })?;
    Ok(())
}

/// Counts of every class `(ℓ, d, t)` among multigraphs with loops in
/// `loops ∩ {0,1}` and links in `links ∩ {0,1,2,3}`.
pub fn census(
    k: &DegreeSequence,
    loops: &MultiplicitySet,
    links: &MultiplicitySet,
    budget: u64,
) -> Result<Census> {
    k.check_even()?;
    let loops = loops.intersect_upto(1);
    let links = links.intersect_upto(3);
    let tally = RowDp::<CensusTally>::new(&loops, &links, budget).solve(k.degrees())?;
    Ok(tally.0)
}

/// Number of multigraphs with exactly the class signature `sig`.
pub fn count_class(k: &DegreeSequence, sig: ClassSignature) -> Result<BigUint> {
    let all = census(
        k,
        &MultiplicitySet::finite([0, 1]),
        &MultiplicitySet::finite([0, 1, 2, 3]),
        DEFAULT_BUDGET,
    )?;
    Ok(all.get(&sig).cloned().unwrap_or_default())
}

pub fn count_region(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    region: Region,
) -> Result<BigUint> {
    k.check_even()?;
    let th = Thresholds::new(k);
    count_region_with(k, j, jstar, region, &th, DEFAULT_BUDGET)
}

pub fn count_region_with(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    region: Region,
    th: &Thresholds,
    budget: u64,
) -> Result<BigUint> {
    k.check_even()?;
    let caps = match region {
        Region::G0 => {
            let (g0_links, g0_loops) = g0_sets(j, jstar);
            return RowDp::<BigUint>::new(&g0_loops, &g0_links, budget).solve(k.degrees());
        }
        Region::G0MinusY => (th.n1, th.n2, th.n3),
        Region::Z => (th.n1.div_ceil(2), th.n2.div_ceil(2), th.n3.div_ceil(2)),
    };
    let c = census(k, jstar, j, budget)?;
    Ok(c.iter()
        .filter(|(s, _)| u64::from(s.ell) <= caps.0 && u64::from(s.d) <= caps.1 && u64::from(s.t) <= caps.2)
        .map(|(_, v)| v)
        .sum())
}

/// `(J ∪ {4,5,..}, J* ∪ {2,3,..})`, the link and loop sets of the relaxed family.
pub fn g0_sets(j: &MultiplicitySet, jstar: &MultiplicitySet) -> (MultiplicitySet, MultiplicitySet) {
    (
        j.union(&MultiplicitySet::new([], Some(4))),
        jstar.union(&MultiplicitySet::new([], Some(2))),
    )
}

// ---------------------------------------------------------------------------
// Strategy 1: cell-by-cell backtracking.

struct CellSearch<'a> {
    n: usize,
    loops: &'a MultiplicitySet,
    links: &'a MultiplicitySet,
    residual: Vec<u32>,
    mult: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl<'a> CellSearch<'a> {
    fn new(
        k: &DegreeSequence,
        loops: &'a MultiplicitySet,
        links: &'a MultiplicitySet,
        budget: u64,
    ) -> Self {
        let n = k.n();
        CellSearch {
            n,
            loops,
            links,
            residual: k.degrees().to_vec(),
            mult: vec![vec![0; n]; n],
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Vec<u32>]) -> ControlFlow<()>) -> Result<()> {
        if self.n == 0 {
            let _ = visit(&self.mult);
            return Ok(());
        }
        self.cell(0, 0, visit).map(|_| ())
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded { limit: self.budget })
        } else {
            Ok(())
        }
    }

    fn link_cap(&self, r: u32) -> u32 {
        self.links.max_finite().map_or(r, |m| m.min(r))
    }

    fn loop_cap(&self, r: u32) -> u32 {
        self.loops.members_upto(r / 2).last().unwrap_or(0)
    }

    /// Can the residual of row `i` still be covered by cells `(i, from..)`?
    fn row_reachable(&self, i: usize, from: usize) -> bool {
        let cap: u64 = (from..self.n)
            .map(|j| u64::from(self.link_cap(self.residual[j])))
            .sum();
        u64::from(self.residual[i]) <= cap
    }

    /// After row `i` is settled, every later vertex must still be coverable.
    fn later_rows_reachable(&self, i: usize) -> bool {
        let caps: Vec<u64> = (i + 1..self.n)
            .map(|v| u64::from(self.link_cap(self.residual[v])))
            .collect();
        let total: u64 = caps.iter().sum();
        (i + 1..self.n).zip(&caps).all(|(v, &own)| {
            let r = self.residual[v];
            u64::from(r) <= 2 * u64::from(self.loop_cap(r)) + total - own
        })
    }

    fn cell(
        &mut self,
        i: usize,
        j: usize,
        visit: &mut dyn FnMut(&[Vec<u32>]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        self.tick()?;
        if i == self.n {
            return Ok(visit(&self.mult));
        }
        if j == self.n {
            if self.residual[i] != 0 || !self.later_rows_reachable(i) {
                return Ok(ControlFlow::Continue(()));
            }
            return self.cell(i + 1, i + 1, visit);
        }
        if j == i {
            let choices: Vec<u32> = self.loops.members_upto(self.residual[i] / 2).collect();
            for a in choices {
                self.residual[i] -= 2 * a;
                self.mult[i][i] = a;
                let ok = i + 1 == self.n && self.residual[i] == 0 || self.row_reachable(i, i + 1);
                let flow = if ok {
                    self.cell(i, i + 1, visit)?
                } else {
                    ControlFlow::Continue(())
                };
                self.residual[i] += 2 * a;
                self.mult[i][i] = 0;
                if flow.is_break() {
                    return Ok(flow);
                }
            }
            return Ok(ControlFlow::Continue(()));
        }
        let upper = self.residual[i].min(self.residual[j]);
        let last = j + 1 == self.n;
        let choices: Vec<u32> = if last {
            let r = self.residual[i];
            if r <= upper && self.links.contains(r) {
                vec![r]
            } else {
                vec![]
            }
        } else {
            self.links.members_upto(upper).collect()
        };
        for a in choices {
            self.residual[i] -= a;
            self.residual[j] -= a;
            self.mult[i][j] = a;
            self.mult[j][i] = a;
            let flow = if last || self.row_reachable(i, j + 1) {
                self.cell(i, j + 1, visit)?
            } else {
                ControlFlow::Continue(())
            };
            self.residual[i] += a;
            self.residual[j] += a;
            self.mult[i][j] = 0;
            self.mult[j][i] = 0;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

// ---------------------------------------------------------------------------
// Strategy 2: row-by-row dynamic programming over sorted residual vectors.

trait Tally: Clone {
    fn zero() -> Self;
    fn unit() -> Self;
    fn add_shifted(&mut self, other: &Self, shift: ClassSignature);
}

impl Tally for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn unit() -> Self {
        <BigUint as One>::one()
    }
    fn add_shifted(&mut self, other: &Self, _shift: ClassSignature) {
        *self += other;
    }
}

#[derive(Clone, Default)]
struct CensusTally(Census);

impl Tally for CensusTally {
    fn zero() -> Self {
        CensusTally::default()
    }
    fn unit() -> Self {
        CensusTally(Census::from([(ClassSignature::default(), BigUint::one())]))
    }
    fn add_shifted(&mut self, other: &Self, shift: ClassSignature) {
        for (sig, v) in &other.0 {
            let key = ClassSignature::new(sig.ell + shift.ell, sig.d + shift.d, sig.t + shift.t);
            *self.0.entry(key).or_default() += v;
        }
    }
}

struct RowDp<'a, T> {
    loops: &'a MultiplicitySet,
    links: &'a MultiplicitySet,
    memo: HashMap<Vec<u32>, T>,
    nodes: u64,
    budget: u64,
}

impl<'a, T: Tally> RowDp<'a, T> {
    fn new(loops: &'a MultiplicitySet, links: &'a MultiplicitySet, budget: u64) -> Self {
        RowDp {
            loops,
            links,
            memo: HashMap::new(),
            nodes: 0,
            budget,
        }
    }

    fn solve(mut self, degrees: &[u32]) -> Result<T> {
        let mut start = degrees.to_vec();
        start.sort_unstable();
        self.state(start)
    }

    fn state(&mut self, residual: Vec<u32>) -> Result<T> {
        if residual.is_empty() {
            return Ok(T::unit());
        }
        if let Some(hit) = self.memo.get(&residual) {
            return Ok(hit.clone());
        }
        let head = residual[0];
        let rest = &residual[1..];
        let mut acc = T::zero();
        let loops: Vec<u32> = self.loops.members_upto(head / 2).collect();
        for a in loops {
            let shift = ClassSignature::new(u32::from(a == 1), 0, 0);
            let mut next = rest.to_vec();
            self.assign(rest, 0, head - 2 * a, &mut next, shift, &mut acc)?;
        }
        self.memo.insert(residual, acc.clone());
        Ok(acc)
    }

    /// Distribute `remaining` over links from the settled vertex to
    /// `rest[idx..]`, recursing into the next state once it is exhausted.
    fn assign(
        &mut self,
        rest: &[u32],
        idx: usize,
        remaining: u32,
        next: &mut Vec<u32>,
        shift: ClassSignature,
        acc: &mut T,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        if idx == rest.len() {
            if remaining == 0 {
                let mut key = next.clone();
                key.sort_unstable();
                let sub = self.state(key)?;
                acc.add_shifted(&sub, shift);
            }
            return Ok(());
        }
        let cap = |r: u32| self.links.max_finite().map_or(r, |m| m.min(r));
        let reachable: u64 = rest[idx..].iter().map(|&r| u64::from(cap(r))).sum();
        if u64::from(remaining) > reachable {
            return Ok(());
        }
        let upper = remaining.min(rest[idx]);
        let choices: Vec<u32> = self.links.members_upto(upper).collect();
        for a in choices {
            next[idx] = rest[idx] - a;
            let mut s = shift;
            match a {
                2 => s.d += 1,
                3 => s.t += 1,
                _ => {}
            }
            self.assign(rest, idx + 1, remaining - a, next, s, acc)?;
        }
        next[idx] = rest[idx];
        Ok(())
    }
}
