//! Coloured flow networks and the switching-theorem bound
//!
//! `Σ_{v∈Y} N(v) ≤ max_{P(Y,Z)} α̂(P) / (1 − max_{P(Y,Y)} α̂(P)) · Σ_{v∈Z} N(v)`
//!
//! for solutions of the four inequality families, together with the
//! reduction from a finite family of objects and coloured relations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed when comparing the two sides of an inequality.
pub const REL_TOL: f64 = 1e-9;

fn le_tol(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + REL_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetEdge {
    pub from: usize,
    pub to: usize,
    pub colour: u32,
    pub alpha: f64,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowNetwork {
    ids: Vec<String>,
    n_values: Vec<f64>,
    edges: Vec<NetEdge>,
    /// Explicit `λ_c(v)`; colours entering `v` without an entry get
    /// `default_lambda`, or `1/|C(v)|` when that is unset.
    lambda: BTreeMap<(usize, u32), f64>,
    default_lambda: Option<f64>,
}

impl FlowNetwork {
    pub fn new(n_values: Vec<f64>) -> Self {
        let ids = (1..=n_values.len()).map(|i| i.to_string()).collect();
        Self::with_ids(ids, n_values)
    }

    pub fn with_ids(ids: Vec<String>, n_values: Vec<f64>) -> Self {
        assert_eq!(ids.len(), n_values.len());
        FlowNetwork {
            ids,
            n_values,
            edges: Vec::new(),
            lambda: BTreeMap::new(),
            default_lambda: None,
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, colour: u32, alpha: f64, s: f64) -> Result<()> {
        if from >= self.len() || to >= self.len() {
            return Err(Error::InvalidInput(format!("edge {from}->{to} leaves the vertex set")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidInput(format!("edge {from}->{to} has weight {alpha}")));
        }
        if s.is_nan() {
            return Err(Error::InvalidInput(format!("edge {from}->{to} has load NaN")));
        }
        self.edges.push(NetEdge { from, to, colour, alpha, s });
        Ok(())
    }

    pub fn set_lambda(&mut self, v: usize, colour: u32, value: f64) {
        self.lambda.insert((v, colour), value);
    }

    pub fn set_default_lambda(&mut self, value: f64) {
        self.default_lambda = Some(value);
    }

    pub fn len(&self) -> usize {
        self.n_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_values.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn n_values(&self) -> &[f64] {
        &self.n_values
    }

    pub fn n_values_mut(&mut self) -> &mut [f64] {
        &mut self.n_values
    }

    pub fn edges(&self) -> &[NetEdge] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut [NetEdge] {
        &mut self.edges
    }

    /// `C(v)`: colours of edges entering `v`.
    pub fn entering_colours(&self, v: usize) -> BTreeSet<u32> {
        self.edges.iter().filter(|e| e.to == v).map(|e| e.colour).collect()
    }

    pub fn lambda(&self, v: usize, colour: u32) -> f64 {
        if let Some(&x) = self.lambda.get(&(v, colour)) {
            return x;
        }
        if let Some(x) = self.default_lambda {
            return x;
        }
        let k = self.entering_colours(v).len().max(1);
        1.0 / k as f64
    }

    /// `α̂(e) = α(e) / λ_{c(e)}(head)`.
    pub fn hat_alpha(&self, e: &NetEdge) -> f64 {
        e.alpha / self.lambda(e.to, e.colour)
    }

    /// `λ` must be positive with `Σ_{c∈C(v)} λ_c(v) ≤ 1`.
    pub fn check_lambda(&self) -> Result<()> {
        for v in 0..self.len() {
            let cols = self.entering_colours(v);
            let mut total = 0.0;
            for &c in &cols {
                let l = self.lambda(v, c);
                if !(l > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "lambda at vertex {} colour {c} is {l}",
                        self.ids[v]
                    )));
                }
                total += l;
            }
            if !le_tol(total, 1.0) {
                return Err(Error::InvalidInput(format!(
                    "lambda at vertex {} sums to {total}",
                    self.ids[v]
                )));
            }
        }
        Ok(())
    }

    pub fn is_sink(&self, v: usize) -> bool {
        !self.edges.iter().any(|e| e.from == v)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// `ineq1` .. `ineq4`.
    pub family: &'static str,
    pub vertex: String,
    pub colour: Option<u32>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks the four inequality families on the stored `(N, s)`.
pub fn feasible(net: &FlowNetwork) -> Feasibility {
    let mut violations = Vec::new();
    for (v, &n) in net.n_values.iter().enumerate() {
        if n < 0.0 {
            violations.push(Violation {
                family: "ineq1",
                vertex: net.ids[v].clone(),
                colour: None,
                lhs: n,
                rhs: 0.0,
            });
        }
    }
    for e in &net.edges {
        if e.s < 0.0 {
            violations.push(Violation {
                family: "ineq2",
                vertex: net.ids[e.from].clone(),
                colour: Some(e.colour),
                lhs: e.s,
                rhs: 0.0,
            });
        }
    }
    let mut into: BTreeMap<(usize, u32), f64> = BTreeMap::new();
    let mut out: BTreeMap<(usize, u32), f64> = BTreeMap::new();
    for e in &net.edges {
        *into.entry((e.to, e.colour)).or_default() += e.s;
        *out.entry((e.from, e.colour)).or_default() += e.alpha * e.s;
    }
    for (&(v, c), &sum) in &into {
        if !le_tol(sum, net.n_values[v]) {
            violations.push(Violation {
                family: "ineq3",
                vertex: net.ids[v].clone(),
                colour: Some(c),
                lhs: sum,
                rhs: net.n_values[v],
            });
        }
    }
    for (&(v, c), &sum) in &out {
        if !le_tol(net.n_values[v], sum) {
            violations.push(Violation {
                family: "ineq4",
                vertex: net.ids[v].clone(),
                colour: Some(c),
                lhs: sum,
                rhs: net.n_values[v],
            });
        }
    }
    Feasibility {
        ok: violations.is_empty(),
        violations,
    }
}

/// The single-colour system obtained with `ŝ(vw) = s(vw) λ_{c(vw)}(w)`:
/// incoming `ŝ` at most `N(v)`, outgoing `α̂ ŝ` at least `N(v)`.
pub fn one_colour_feasible(net: &FlowNetwork) -> bool {
    let mut into = vec![0.0; net.len()];
    let mut out = vec![None::<f64>; net.len()];
    for e in &net.edges {
        let s_hat = e.s * net.lambda(e.to, e.colour);
        into[e.to] += s_hat;
        *out[e.from].get_or_insert(0.0) += net.hat_alpha(e) * s_hat;
    }
    (0..net.len()).all(|v| {
        let n = net.n_values[v];
        n >= 0.0 && le_tol(into[v], n) && out[v].is_none_or(|o| le_tol(n, o))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathMaxima {
    /// Maximum of `α̂(P)` over `P(Y, Z)`; 0 if there is no such path.
    pub to_z: f64,
    /// Maximum of `α̂(P)` over `P(Y, Y)`.
    pub to_y: f64,
}

/// Path maxima over non-trivial vertex-simple directed paths that start in
/// `y`, end in `z` (resp. `y`) and have every internal vertex outside
/// `y ∪ z`. A path from `Y` back to its own start is allowed.
pub fn hat_alpha_path(net: &FlowNetwork, y: &[usize], z: &[usize]) -> Result<PathMaxima> {
    let (ys, zs) = sets(net, y, z)?;
    let internal_contracting = net
        .edges
        .iter()
        .filter(|e| !ys.contains(&e.from) && !zs.contains(&e.from))
        .all(|e| net.hat_alpha(e) <= 1.0);
    if internal_contracting {
        Ok(PathMaxima {
            to_z: best_products(net, &ys, &zs, &zs),
            to_y: best_products(net, &ys, &zs, &ys),
        })
    } else {
        Ok(exhaustive_paths(net, &ys, &zs))
    }
}

fn sets(net: &FlowNetwork, y: &[usize], z: &[usize]) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let ys: BTreeSet<usize> = y.iter().copied().collect();
    let zs: BTreeSet<usize> = z.iter().copied().collect();
    if let Some(&bad) = ys.iter().chain(&zs).find(|&&v| v >= net.len()) {
        return Err(Error::InvalidInput(format!("vertex index {bad} out of range")));
    }
    if !ys.is_disjoint(&zs) {
        return Err(Error::SetOverlap);
    }
    Ok((ys, zs))
}

#[derive(PartialEq)]
struct Best(f64, usize);

impl Eq for Best {}

impl PartialOrd for Best {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Best {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Max-product search from all of `ys` through internal vertices. Valid when
/// every edge leaving an internal vertex has `α̂ ≤ 1`: products then never
/// grow along a path, so the best walk to each vertex is simple.
fn best_products(net: &FlowNetwork, ys: &BTreeSet<usize>, zs: &BTreeSet<usize>, target: &BTreeSet<usize>) -> f64 {
    let internal = |v: usize| !ys.contains(&v) && !zs.contains(&v);
    let mut best = vec![0.0f64; net.len()];
    let mut heap = BinaryHeap::new();
    let mut answer = 0.0f64;
    for e in net.edges.iter().filter(|e| ys.contains(&e.from)) {
        let h = net.hat_alpha(e);
        if target.contains(&e.to) {
            answer = answer.max(h);
        } else if internal(e.to) && h > best[e.to] {
            best[e.to] = h;
            heap.push(Best(h, e.to));
        }
    }
    let mut done = vec![false; net.len()];
    let mut out_edges: HashMap<usize, Vec<&NetEdge>> = HashMap::new();
    for e in &net.edges {
        out_edges.entry(e.from).or_default().push(e);
    }
    while let Some(Best(p, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for e in out_edges.get(&v).into_iter().flatten() {
            let q = p * net.hat_alpha(e);
            if target.contains(&e.to) {
                answer = answer.max(q);
            } else if internal(e.to) && !done[e.to] && q > best[e.to] {
                best[e.to] = q;
                heap.push(Best(q, e.to));
            }
        }
    }
    answer
}

/// Depth-first enumeration of every admissible simple path.
fn exhaustive_paths(net: &FlowNetwork, ys: &BTreeSet<usize>, zs: &BTreeSet<usize>) -> PathMaxima {
    let mut out_edges: Vec<Vec<&NetEdge>> = vec![Vec::new(); net.len()];
    for e in &net.edges {
        out_edges[e.from].push(e);
    }
    let mut res = PathMaxima { to_z: 0.0, to_y: 0.0 };
    let mut on_path = vec![false; net.len()];
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        net: &FlowNetwork,
        out_edges: &[Vec<&NetEdge>],
        ys: &BTreeSet<usize>,
        zs: &BTreeSet<usize>,
        v: usize,
        prod: f64,
        on_path: &mut [bool],
        res: &mut PathMaxima,
    ) {
        for e in &out_edges[v] {
            let q = prod * net.hat_alpha(e);
            if zs.contains(&e.to) {
                res.to_z = res.to_z.max(q);
            } else if ys.contains(&e.to) {
                res.to_y = res.to_y.max(q);
            } else if !on_path[e.to] {
                on_path[e.to] = true;
                dfs(net, out_edges, ys, zs, e.to, q, on_path, res);
                on_path[e.to] = false;
            }
        }
    }
    for &y in ys {
        dfs(net, &out_edges, ys, zs, y, 1.0, &mut on_path, &mut res);
    }
    res
}

/// Every admissible simple path, for cross-checking [`hat_alpha_path`].
pub fn hat_alpha_path_exhaustive(net: &FlowNetwork, y: &[usize], z: &[usize]) -> Result<PathMaxima> {
    let (ys, zs) = sets(net, y, z)?;
    Ok(exhaustive_paths(net, &ys, &zs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub lhs: f64,
    pub rhs: f64,
    pub max_yz: f64,
    pub max_yy: f64,
    pub holds: bool,
}

/// Checks the structural conditions on `(Y, Z)` and then the path inequality
/// for the stored `N`. A `Certificate` with `holds = false` is a
/// counterexample.
pub fn verify_bound(net: &FlowNetwork, y: &[usize], z: &[usize]) -> Result<Certificate> {
    net.check_lambda()?;
    if z.is_empty() {
        return Err(Error::StructuralViolation("Z is empty".into()));
    }
    let (ys, zs) = match sets(net, y, z) {
        Err(Error::SetOverlap) => return Err(Error::StructuralViolation("Y and Z intersect".into())),
        other => other?,
    };
    for v in 0..net.len() {
        if zs.contains(&v) {
            continue;
        }
        if net.is_sink(v) {
            return Err(Error::StructuralViolation(format!("sink {} is not in Z", net.ids[v])));
        }
        if let Some(e) = net.edges.iter().find(|e| e.from == v && net.hat_alpha(e) >= 1.0) {
            return Err(Error::StructuralViolation(format!(
                "vertex {} has an outgoing edge to {} with hat-alpha {} >= 1 but is not in Z",
                net.ids[v],
                net.ids[e.to],
                net.hat_alpha(e)
            )));
        }
    }
    let pm = hat_alpha_path(net, y, z)?;
    if pm.to_y >= 1.0 {
        return Err(Error::DivergentBound { max_yy: pm.to_y });
    }
    let lhs: f64 = ys.iter().map(|&v| net.n_values[v]).sum();
    let sum_z: f64 = zs.iter().map(|&v| net.n_values[v]).sum();
    let rhs = pm.to_z / (1.0 - pm.to_y) * sum_z;
    Ok(Certificate {
        lhs,
        rhs,
        max_yz: pm.to_z,
        max_yy: pm.to_y,
        holds: le_tol(lhs, rhs),
    })
}

// ---------------------------------------------------------------------------
// Counting setups.

/// Objects `0..class_of.len()` partitioned into classes, with coloured
/// relations and claimed per-class bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingSetup {
    pub class_of: Vec<usize>,
    pub classes: usize,
    /// `(colour, Q, R)`, a multiset.
    pub relations: Vec<(u32, usize, usize)>,
    /// `a_c(v)`, keyed by `(v, c)`.
    pub a: BTreeMap<(usize, u32), f64>,
    /// `b_c(w)`, keyed by `(w, c)`.
    pub b: BTreeMap<(usize, u32), f64>,
}

impl CountingSetup {
    /// The tightest valid bounds: `a` the least out-count, `b` the greatest
    /// in-count, over each class and colour that occurs.
    pub fn with_tight_bounds(class_of: Vec<usize>, classes: usize, relations: Vec<(u32, usize, usize)>) -> Self {
        let (outs, ins) = tallies(&class_of, &relations);
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (&(v, c), counts) in &outs {
            a.insert((v, c), counts.iter().copied().min().unwrap_or(0) as f64);
        }
        for (&(w, c), counts) in &ins {
            b.insert((w, c), counts.iter().copied().max().unwrap_or(0) as f64);
        }
        CountingSetup {
            class_of,
            classes,
            relations,
            a,
            b,
        }
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.classes];
        for &v in &self.class_of {
            sizes[v] += 1;
        }
        sizes
    }
}

type Tally = BTreeMap<(usize, u32), Vec<usize>>;

/// Per (class, colour) touched by some relation: the out-count (resp.
/// in-count) of every object of the class, including zeros.
fn tallies(class_of: &[usize], relations: &[(u32, usize, usize)]) -> (Tally, Tally) {
    let mut out_obj: HashMap<(usize, u32), usize> = HashMap::new();
    let mut in_obj: HashMap<(usize, u32), usize> = HashMap::new();
    let mut out_keys = BTreeSet::new();
    let mut in_keys = BTreeSet::new();
    for &(c, q, r) in relations {
        *out_obj.entry((q, c)).or_default() += 1;
        *in_obj.entry((r, c)).or_default() += 1;
        out_keys.insert((class_of[q], c));
        in_keys.insert((class_of[r], c));
    }
    let collect = |keys: BTreeSet<(usize, u32)>, per: &HashMap<(usize, u32), usize>| -> Tally {
        keys.into_iter()
            .map(|(v, c)| {
                let counts = (0..class_of.len())
                    .filter(|&o| class_of[o] == v)
                    .map(|o| per.get(&(o, c)).copied().unwrap_or(0))
                    .collect();
                ((v, c), counts)
            })
            .collect()
    };
    (collect(out_keys, &out_obj), collect(in_keys, &in_obj))
}

/// Builds the network with `N(v) = |S(v)|`, `s = s'/b_c(w)` and
/// `α = b_c(w)/a_c(v)`, after checking every claimed bound against the
/// relation. `lambda` fixes every `λ_c(v)`; `None` means `1/|C(v)|`.
pub fn from_counting_setup(cs: &CountingSetup, lambda: Option<f64>) -> Result<FlowNetwork> {
    if cs.class_of.iter().any(|&v| v >= cs.classes) {
        return Err(Error::InvalidInput("object assigned to an unknown class".into()));
    }
    if cs.relations.iter().any(|&(_, q, r)| q >= cs.class_of.len() || r >= cs.class_of.len()) {
        return Err(Error::InvalidInput("relation names an unknown object".into()));
    }
    let (outs, ins) = tallies(&cs.class_of, &cs.relations);
    for (&(v, c), counts) in &outs {
        let a = cs.a.get(&(v, c)).copied().unwrap_or(0.0);
        let least = counts.iter().copied().min().unwrap_or(0);
        if !(a > 0.0) || a > least as f64 {
            return Err(Error::InvalidBound {
                class: v,
                colour: c,
                detail: format!("a = {a} but some object has {least} outgoing relations"),
            });
        }
    }
    for (&(w, c), counts) in &ins {
        let b = cs.b.get(&(w, c)).copied().unwrap_or(0.0);
        let most = counts.iter().copied().max().unwrap_or(0);
        if !(b > 0.0) || (most as f64) > b {
            return Err(Error::InvalidBound {
                class: w,
                colour: c,
                detail: format!("b = {b} but some object has {most} incoming relations"),
            });
        }
    }
    let sizes = cs.class_sizes();
    let mut agg: BTreeMap<(usize, usize, u32), usize> = BTreeMap::new();
    for &(c, q, r) in &cs.relations {
        *agg.entry((cs.class_of[q], cs.class_of[r], c)).or_default() += 1;
    }
    let mut net = FlowNetwork::new(sizes.iter().map(|&s| s as f64).collect());
    for (&(v, w, c), &s_prime) in &agg {
        let a = cs.a[&(v, c)];
        let b = cs.b[&(w, c)];
        net.add_edge(v, w, c, b / a, s_prime as f64 / b)?;
    }
    if let Some(l) = lambda {
        net.set_default_lambda(l);
    }
    net.check_lambda()?;
    Ok(net)
}

/// A random setup with up to `max_classes` classes, `max_colours` colours
/// and `max_objects` objects. Every object of a class that uses a colour
/// gets at least one relation of that colour.
pub fn random_counting_setup<R: Rng + ?Sized>(
    rng: &mut R,
    max_classes: usize,
    max_colours: u32,
    max_objects: usize,
) -> CountingSetup {
    let classes = rng.random_range(1..=max_classes);
    let objects = rng.random_range(classes..=max_objects.max(classes));
    let mut class_of: Vec<usize> = (0..classes).collect();
    class_of.extend((classes..objects).map(|_| rng.random_range(0..classes)));
    let colours = rng.random_range(1..=max_colours);
    let mut relations = Vec::new();
    for c in 1..=colours {
        for v in 0..classes {
            if !rng.random_bool(0.5) {
                continue;
            }
            for q in (0..objects).filter(|&o| class_of[o] == v) {
                for _ in 0..rng.random_range(1..=3) {
                    relations.push((c, q, rng.random_range(0..objects)));
                }
            }
        }
    }
    CountingSetup::with_tight_bounds(class_of, classes, relations)
}

/// A `(Y, Z)` pair meeting the structural conditions for `net`, when one
/// exists: `Z` holds every sink and every vertex with an outgoing `α̂ ≥ 1`
/// plus random extras, `Y` is a random subset of the rest.
pub fn random_admissible_sets<R: Rng + ?Sized>(rng: &mut R, net: &FlowNetwork) -> (Vec<usize>, Vec<usize>) {
    let mut z = Vec::new();
    let mut rest = Vec::new();
    for v in 0..net.len() {
        let forced = net.is_sink(v) || net.edges.iter().any(|e| e.from == v && net.hat_alpha(e) >= 1.0);
        if forced || rng.random_bool(0.25) {
            z.push(v);
        } else {
            rest.push(v);
        }
    }
    if z.is_empty() {
        let i = rng.random_range(0..rest.len());
        z.push(rest.remove(i));
    }
    let y = rest.into_iter().filter(|_| rng.random_bool(0.6)).collect();
    (y, z)
}

/// Rescales individual loads at random, keeping a change only if the
/// inequality families still hold.
pub fn perturb_loads<R: Rng + ?Sized>(rng: &mut R, net: &mut FlowNetwork) {
    for i in 0..net.edges.len() {
        let old = net.edges[i].s;
        net.edges[i].s = old * rng.random_range(0.5..1.5);
        if !feasible(net).ok {
            net.edges[i].s = old;
        }
    }
}
