//! Tensor rank of a code through rank-one covers.
//!
//! `trk(C)` is the least dimension of a space spanned by rank-one elements and
//! containing `C`. Rank-one elements of `L_{n,q}` are the trace functions
//! `α·Tr(βx)`; up to `F_q`-scalars they are the lines `η^i Tr(η^j x)` with
//! `0 ≤ i, j < L = (q^n − 1)/(q − 1)`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqmat::{self, Echelon};
use crate::linpoly::{Algebra, LinPoly};
use crate::rankcode::{self, Code, EchelonSpace};

/// The line `η^i Tr(η^j x)`; serialized as `[i, j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct RankOneLine {
    pub i: u32,
    pub j: u32,
}

impl From<(u32, u32)> for RankOneLine {
    fn from((i, j): (u32, u32)) -> Self {
        RankOneLine { i, j }
    }
}

impl From<RankOneLine> for (u32, u32) {
    fn from(l: RankOneLine) -> Self {
        (l.i, l.j)
    }
}

impl std::fmt::Display for RankOneLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl RankOneLine {
    pub fn new(i: u32, j: u32) -> Self {
        RankOneLine { i, j }
    }

    /// Reduces both exponents modulo `L`; proportional lines get equal forms.
    pub fn canonical(self, alg: &Algebra) -> Self {
        let l = lines_per_axis(alg) as u32;
        RankOneLine::new(self.i % l, self.j % l)
    }

    pub fn poly(self, alg: &Algebra) -> LinPoly {
        let f = alg.field();
        alg.trace_poly(f.eta_pow(self.i as i64), f.eta_pow(self.j as i64))
            .expect("powers of η are nonzero")
    }
}

/// `L = (q^n − 1)/(q − 1)`.
pub fn lines_per_axis(alg: &Algebra) -> usize {
    alg.field().group_order() as usize / (alg.q() - 1)
}

/// Canonical line through a rank-one polynomial, `None` if `f` is not rank one.
pub fn line_of(alg: &Algebra, f: &LinPoly) -> Option<RankOneLine> {
    if f.len() != alg.n() || alg.rank(f) != 1 {
        return None;
    }
    let fld = alg.field();
    let (f0, f1) = (f.coeffs[0], f.coeffs[1 % alg.n()]);
    // f_0 = αβ, f_1 = αβ^q, so β^{q-1} = f_1/f_0
    let ratio = fld.div(f1, f0).ok()?.log()? as u64;
    let q1 = alg.q() as u64 - 1;
    if ratio % q1 != 0 {
        return None;
    }
    let j = ratio / q1;
    let beta = fld.eta_pow(j as i64);
    let alpha = fld.div(f0, beta).ok()?;
    let line = RankOneLine::new(alpha.log()?, j as u32).canonical(alg);
    Some(line)
}

/// All canonical lines in coefficient coordinates, in lexicographic `(i, j)` order.
pub struct LineTable {
    alg: Arc<Algebra>,
    per_axis: usize,
    width: usize,
    vecs: Vec<u8>,
}

impl LineTable {
    pub fn new(alg: Arc<Algebra>) -> Self {
        let per_axis = lines_per_axis(&alg);
        let width = alg.dim();
        let fld = alg.field();
        let n = alg.n();
        let mut vecs = Vec::with_capacity(per_axis * per_axis * width);
        for i in 0..per_axis {
            for j in 0..per_axis {
                for k in 0..n {
                    let c = fld.mul(
                        fld.eta_pow(i as i64),
                        fld.frob_pow(fld.eta_pow(j as i64), k),
                    );
                    vecs.extend_from_slice(alg.coords(c));
                }
            }
        }
        LineTable {
            alg,
            per_axis,
            width,
            vecs,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.per_axis * self.per_axis
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn vec(&self, idx: usize) -> &[u8] {
        &self.vecs[idx * self.width..(idx + 1) * self.width]
    }

    pub fn line(&self, idx: usize) -> RankOneLine {
        RankOneLine::new((idx / self.per_axis) as u32, (idx % self.per_axis) as u32)
    }

    pub fn index(&self, line: RankOneLine) -> usize {
        let c = line.canonical(&self.alg);
        c.i as usize * self.per_axis + c.j as usize
    }
}

/// `h + d − 1`; the minimum distance is enumerated when affordable, otherwise
/// taken from the Gabidulin parameters `d = n − k + 1`.
pub fn kruskal_bound(code: &Code) -> Result<usize> {
    Ok(code.h() + distance(code)? - 1)
}

pub(crate) fn distance(code: &Code) -> Result<usize> {
    match rankcode::min_distance(code, rankcode::DEFAULT_CODEWORD_BUDGET) {
        Ok(d) => Ok(d),
        Err(e @ Error::BudgetExceeded { .. }) => match code.gabidulin_params() {
            Some(p) => Ok(code.algebra().n() - p.k + 1),
            None => Err(e),
        },
        Err(e) => Err(e),
    }
}

/// Every canonical line, ordered by `(i, j)`.
pub fn all_rank_one_lines(alg: &Algebra) -> Vec<RankOneLine> {
    let l = lines_per_axis(alg) as u32;
    (0..l)
        .flat_map(|i| (0..l).map(move |j| RankOneLine::new(i, j)))
        .collect()
}

/// Dimension of the span of the rank-one elements of a space, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneSpan {
    pub span_dim: usize,
    pub witnesses: Vec<RankOneLine>,
}

/// Finds the span of rank-one elements of `u`.
///
/// Two strategies, whichever is cheaper: walk all `q^{dim U}` elements, or test
/// each of the `L²` lines against a parity check of `u`. `budget` bounds the
/// cost of the chosen strategy.
pub fn rank_ones_spanning(u: &EchelonSpace, budget: u128) -> Result<RankOneSpan> {
    let alg = u.algebra().clone();
    let q = alg.q() as u128;
    let dim = u.dim();
    let walk_cost = q.checked_pow(dim as u32).unwrap_or(u128::MAX);
    let l = lines_per_axis(&alg) as u128;
    let scan_cost = l * l;
    let cost = walk_cost.min(scan_cost);
    if cost > budget {
        return Err(Error::BudgetExceeded {
            needed: cost,
            allowed: budget,
        });
    }
    if walk_cost <= scan_cost {
        Ok(span_by_walk(u))
    } else {
        let table = LineTable::new(alg);
        Ok(span_by_scan(&table, u.echelon()))
    }
}

fn span_by_walk(u: &EchelonSpace) -> RankOneSpan {
    let alg = u.algebra();
    let sub = alg.sub();
    let n = alg.n();
    let w = alg.dim();
    let target = u.dim();
    // generators carry coefficient and matrix coordinates side by side
    let gens: Vec<Vec<u8>> = u
        .echelon()
        .rows()
        .map(|r| {
            let mut g = r.to_vec();
            g.extend(alg.vec_to_matrix(r));
            g
        })
        .collect();
    let mut span = Echelon::new(w);
    let mut witnesses = Vec::new();
    if target > 0 {
        fqmat::gray_walk(sub, &gens, &vec![0u8; w + n * n], |v| {
            let (coef, mat) = v.split_at(w);
            if fqmat::is_rank_one(sub, mat, n, n) && span.insert(sub, coef) {
                witnesses.push(line_of(alg, &alg.from_vec(coef)).expect("rank one"));
            }
            span.dim() < target
        });
    }
    RankOneSpan {
        span_dim: span.dim(),
        witnesses,
    }
}

fn span_by_scan(table: &LineTable, u: &Echelon) -> RankOneSpan {
    let sub = table.alg.sub();
    let h = u.parity_check(sub);
    let mut span = Echelon::new(table.width);
    let mut witnesses = Vec::new();
    for idx in 0..table.len() {
        if span.dim() == u.dim() {
            break;
        }
        let v = table.vec(idx);
        if h.annihilates(sub, v) && span.insert(sub, v) {
            witnesses.push(table.line(idx));
        }
    }
    RankOneSpan {
        span_dim: span.dim(),
        witnesses,
    }
}

/// True iff `code + ⟨gens⟩` has dimension `h + |gens|` and is spanned by its
/// rank-one elements.
pub fn check_extension(code: &Code, gens: &[RankOneLine], budget: u128) -> Result<bool> {
    let alg = code.algebra();
    let mut u = code.space().clone();
    for g in gens {
        if !u.insert(&g.poly(alg)) {
            return Ok(false);
        }
    }
    Ok(rank_ones_spanning(&u, budget)?.span_dim == u.dim())
}

/// True iff `f ↦ η·f` and `f ↦ f(ηx)` map the code into itself. These two maps
/// generate the group `f ↦ a·f(bx)`.
pub fn stabilized_by_twists(code: &Code) -> bool {
    let alg = code.algebra();
    let eta = alg.field().eta_pow(1);
    let one = crate::gf::Elem::ONE;
    code.basis()
        .iter()
        .all(|f| code.contains(&alg.twist(f, eta, one)) && code.contains(&alg.twist(f, one, eta)))
}

/// First-generator candidates: only `Tr(x)` when the twist group stabilizes the
/// code (it acts transitively on lines), all lines otherwise.
pub fn canonical_first_gens(code: &Code) -> Vec<RankOneLine> {
    if stabilized_by_twists(code) {
        vec![RankOneLine::new(0, 0)]
    } else {
        all_rank_one_lines(code.algebra())
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest number of extra generators tried.
    pub t_max: usize,
    /// Cap on the cost of a single rank-one span computation.
    pub element_budget: u128,
    pub use_symmetry: bool,
    /// 0 uses the global rayon pool.
    pub threads: usize,
    pub seed: u64,
    pub timeout: Option<Duration>,
    /// Known perfect basis; once every smaller level is refuted it closes the search.
    pub upper_hint: Option<Vec<RankOneLine>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            t_max: usize::MAX,
            element_budget: 1 << 24,
            use_symmetry: true,
            threads: 0,
            seed: 0,
            timeout: None,
            upper_hint: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Exact,
    LowerBoundOnly,
    UpperBoundOnly,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub q: usize,
    pub n: usize,
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub status: Status,
    pub trk_low: usize,
    pub trk_high: Option<usize>,
    pub basis: Option<Vec<RankOneLine>>,
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchResult {
    fn new(code: &Code, status: Status, low: usize, high: Option<usize>) -> Self {
        let alg = code.algebra();
        let g = code.gabidulin_params();
        SearchResult {
            q: alg.q(),
            n: alg.n(),
            k: g.map(|p| p.k),
            s: g.map(|p| p.s),
            status,
            trk_low: low,
            trk_high: high,
            basis: None,
            nodes: 0,
            ms: None,
            note: None,
        }
    }
}

/// Outcome of completing a prefix space `U'` by one more line.
struct Completion {
    witnesses: Vec<usize>,
}

/// Looks for a line `g` with index above `bound` such that `U' + ⟨g⟩` is spanned
/// by its rank-one elements; returns the smallest such `g`.
///
/// Lines in `U' + ⟨g⟩` are those in `U'` together with those whose residue
/// modulo `U'` is proportional to that of `g`, so one pass over the lines
/// settles every choice of `g` at once.
fn complete_last(table: &LineTable, base: &Echelon, bound: Option<usize>) -> Option<Completion> {
    let sub = table.alg.sub();
    let target = base.dim() + 1;
    let mut inner = Echelon::new(table.width);
    let mut inner_wit = Vec::new();
    let mut classes: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    let mut v = vec![0u8; table.width];
    for idx in 0..table.len() {
        v.copy_from_slice(table.vec(idx));
        base.reduce(sub, &mut v);
        match v.iter().position(|&x| x != 0) {
            None => {
                if inner.insert(sub, table.vec(idx)) {
                    inner_wit.push(idx);
                }
            }
            Some(p) => {
                let inv = sub.inv(v[p]);
                sub.scale(&mut v, inv);
                classes.entry(v.clone()).or_default().push(idx);
            }
        }
    }
    let mut candidates: Vec<(usize, &Vec<usize>)> = classes
        .values()
        .filter(|m| inner.dim() + m.len() >= target)
        .filter_map(|m| {
            let first = match bound {
                Some(b) => *m.iter().find(|&&x| x > b)?,
                None => m[0],
            };
            Some((first, m))
        })
        .collect();
    candidates.sort_unstable_by_key(|c| c.0);
    for (_, members) in candidates {
        let mut e = inner.clone();
        let mut wit = inner_wit.clone();
        for &m in members {
            if e.insert(sub, table.vec(m)) {
                wit.push(m);
                if e.dim() == target {
                    break;
                }
            }
        }
        if e.dim() == target {
            return Some(Completion { witnesses: wit });
        }
    }
    None
}

struct LevelSearch<'a> {
    table: &'a LineTable,
    sub: &'a crate::gf::Subfield,
}

impl LevelSearch<'_> {
    /// Depth-first search over sorted choices above `last`; `remaining ≥ 1`.
    fn dfs(
        &self,
        base: &Echelon,
        last: Option<usize>,
        remaining: usize,
        nodes: &mut u64,
    ) -> Option<Completion> {
        if remaining == 1 {
            *nodes += 1;
            return complete_last(self.table, base, last);
        }
        let start = last.map_or(0, |x| x + 1);
        for next in start..self.table.len() {
            let v = self.table.vec(next);
            if base.contains(self.sub, v) {
                continue;
            }
            let mut e = base.clone();
            e.insert(self.sub, v);
            if let Some(c) = self.dfs(&e, Some(next), remaining - 1, nodes) {
                return Some(c);
            }
        }
        None
    }
}

struct LevelOutcome {
    witnesses: Option<Vec<usize>>,
    nodes: u64,
}

/// Decides whether some `t` lines extend the code to a rank-one spanned space.
fn search_level(
    table: &LineTable,
    code: &Code,
    t: usize,
    fixed: &[usize],
    deadline: Option<(Instant, Duration)>,
) -> Result<LevelOutcome> {
    let sub = table.alg.sub();
    let mut base = code.space().echelon().clone();
    for &g in fixed {
        if !base.insert(sub, table.vec(g)) {
            return Ok(LevelOutcome {
                witnesses: None,
                nodes: 0,
            });
        }
    }
    let free = t - fixed.len();
    let last_fixed = fixed.last().copied();
    if free == 0 {
        let span = span_by_scan(table, &base);
        let ok = span.span_dim == base.dim();
        return Ok(LevelOutcome {
            witnesses: ok.then(|| span.witnesses.iter().map(|&l| table.index(l)).collect()),
            nodes: 1,
        });
    }
    let ls = LevelSearch { table, sub };
    if free == 1 {
        let c = complete_last(table, &base, last_fixed);
        return Ok(LevelOutcome {
            witnesses: c.map(|c| c.witnesses),
            nodes: 1,
        });
    }
    // one task per choice of the first free generator
    let tasks: Vec<usize> = (last_fixed.map_or(0, |x| x + 1)..table.len())
        .filter(|&a| !base.contains(sub, table.vec(a)))
        .collect();
    let mut nodes = 0u64;
    const CHUNK: usize = 64;
    for chunk in tasks.chunks(CHUNK) {
        if let Some((start, limit)) = deadline {
            if start.elapsed() > limit {
                return Err(Error::Timeout {
                    elapsed_ms: start.elapsed().as_millis(),
                });
            }
        }
        let results: Vec<(Option<Completion>, u64)> = chunk
            .par_iter()
            .map(|&a| {
                let mut e = base.clone();
                e.insert(sub, table.vec(a));
                let mut local = 0u64;
                let c = ls.dfs(&e, Some(a), free - 1, &mut local);
                (c, local)
            })
            .collect();
        for (c, local) in results {
            nodes += local;
            if let Some(c) = c {
                return Ok(LevelOutcome {
                    witnesses: Some(c.witnesses),
                    nodes,
                });
            }
        }
    }
    Ok(LevelOutcome {
        witnesses: None,
        nodes,
    })
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::BadParameters(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Exhaustive search for `trk(code)`, level by level from `t = d − 1`.
///
/// A failed level `t` proves `trk ≥ h + t + 1`: a minimal rank-one spanning set
/// of a space containing the code is independent and extends a basis of the code
/// by exactly `t` of its own elements.
pub fn exact_tensor_rank(code: &Code, cfg: &SearchConfig) -> Result<SearchResult> {
    let started = Instant::now();
    with_threads(cfg.threads, || exact_inner(code, cfg, started))?
}

fn exact_inner(code: &Code, cfg: &SearchConfig, started: Instant) -> Result<SearchResult> {
    let alg = code.algebra().clone();
    let h = code.h();
    let d = distance(code)?;
    let kruskal = h + d - 1;
    let full = alg.dim();
    let table = LineTable::new(alg.clone());

    let hint = match &cfg.upper_hint {
        Some(b) => {
            let rep = verify_perfect_basis(code, b)?;
            if !(rep.rank_one && rep.independent && rep.contains_code) {
                return Err(Error::BadParameters(format!(
                    "upper hint is not a perfect basis: {}",
                    rep.failures.join("; ")
                )));
            }
            Some(b.clone())
        }
        None => None,
    };

    let symmetric =
        cfg.use_symmetry && stabilized_by_twists(code) && !code.contains(&table.line(0).poly(&alg));
    let deadline = cfg.timeout.map(|t| (started, t));
    let t_last = cfg.t_max.min(full - h);
    let mut nodes = 0u64;
    let mut t = d - 1;
    while t <= t_last {
        if let Some(b) = &hint {
            if b.len() == h + t {
                let mut r = SearchResult::new(code, Status::Exact, h + t, Some(h + t));
                r.basis = Some(b.clone());
                r.nodes = nodes;
                return Ok(r);
            }
        }
        let fixed: Vec<usize> = if symmetric && t >= 1 { vec![0] } else { vec![] };
        let out = search_level(&table, code, t, &fixed, deadline)?;
        nodes += out.nodes;
        if let Some(w) = out.witnesses {
            let mut r = SearchResult::new(code, Status::Exact, h + t, Some(h + t));
            r.basis = Some(w.into_iter().map(|i| table.line(i)).collect());
            r.nodes = nodes;
            return Ok(r);
        }
        t += 1;
    }
    let low = kruskal.max(h + t);
    let mut r = match hint {
        Some(b) => {
            let mut r = SearchResult::new(code, Status::Interval, low, Some(b.len()));
            r.basis = Some(b);
            r
        }
        None => SearchResult::new(code, Status::LowerBoundOnly, low, None),
    };
    r.nodes = nodes;
    Ok(r)
}

/// Random search for a rank-one cover with `r` elements.
///
/// Each trial draws `r − h − 1` random lines (after `Tr(x)` when the twist group
/// stabilizes the code) and then tries every possible last line at once.
/// Trials are independent streams of one seed, so results do not depend on the
/// thread count.
pub fn random_upper_bound(code: &Code, r: usize, trials: u64, seed: u64) -> Result<SearchResult> {
    let alg = code.algebra().clone();
    let h = code.h();
    let kruskal = kruskal_bound(code)?;
    if r < kruskal || r > alg.dim() {
        return Err(Error::BadParameters(format!(
            "target {r} outside [{kruskal}, {}]",
            alg.dim()
        )));
    }
    let sub = alg.sub();
    let table = LineTable::new(alg.clone());
    let t = r - h;
    if t == 0 {
        let span = span_by_scan(&table, code.space().echelon());
        let mut res = SearchResult::new(code, Status::UpperBoundOnly, kruskal, Some(r));
        res.nodes = 1;
        if span.span_dim == h {
            res.basis = Some(span.witnesses);
        } else {
            res.status = Status::LowerBoundOnly;
            res.trk_high = None;
            res.note = Some(format!("no rank-one cover of size {r} found"));
        }
        return Ok(res);
    }
    let fixed: Vec<usize> =
        if stabilized_by_twists(code) && !code.contains(&table.line(0).poly(&alg)) {
            vec![0]
        } else {
            vec![]
        };
    let random_count = (t - 1).saturating_sub(fixed.len());
    let use_fixed = t - 1 >= fixed.len();
    let trial = |index: u64| -> Option<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut base = code.space().echelon().clone();
        if use_fixed {
            for &g in &fixed {
                base.insert(sub, table.vec(g));
            }
        }
        let mut placed = 0;
        let mut attempts = 0;
        while placed < random_count {
            attempts += 1;
            if attempts > 64 * (random_count + 1) {
                return None;
            }
            let g = rng.gen_range(0..table.len());
            if base.insert(sub, table.vec(g)) {
                placed += 1;
            }
        }
        complete_last(&table, &base, None).map(|c| c.witnesses)
    };
    const CHUNK: u64 = 256;
    let mut done = 0u64;
    while done < trials {
        let end = (done + CHUNK).min(trials);
        let found = (done..end)
            .into_par_iter()
            .map(|i| (i, trial(i)))
            .find_first(|(_, w)| w.is_some());
        if let Some((i, Some(w))) = found {
            let mut res = SearchResult::new(code, Status::UpperBoundOnly, kruskal, Some(r));
            res.basis = Some(w.into_iter().map(|x| table.line(x)).collect());
            res.nodes = i + 1;
            return Ok(res);
        }
        done = end;
    }
    let mut res = SearchResult::new(code, Status::LowerBoundOnly, kruskal, None);
    res.nodes = trials;
    res.note = Some(format!(
        "no rank-one cover of size {r} found in {trials} trials"
    ));
    Ok(res)
}

/// Checks on a claimed perfect basis of a space containing the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub size: usize,
    pub rank_one: bool,
    pub independent: bool,
    pub contains_code: bool,
    pub kruskal: usize,
    pub mtr: bool,
    pub failures: Vec<String>,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_perfect_basis(code: &Code, basis: &[RankOneLine]) -> Result<BasisReport> {
    let alg = code.algebra();
    let sub = alg.sub();
    let mut failures = Vec::new();
    let polys: Vec<LinPoly> = basis.iter().map(|l| l.poly(alg)).collect();
    let bad: Vec<String> = basis
        .iter()
        .zip(&polys)
        .filter(|(_, f)| alg.rank(f) != 1)
        .map(|(l, _)| l.to_string())
        .collect();
    let rank_one = bad.is_empty();
    if !rank_one {
        failures.push(format!("not rank one: {}", bad.join(", ")));
    }
    let span = EchelonSpace::from_polys(alg.clone(), &polys);
    let independent = span.dim() == basis.len();
    if !independent {
        failures.push(format!(
            "dependent: span has dimension {} < {}",
            span.dim(),
            basis.len()
        ));
    }
    let missing = code
        .basis()
        .iter()
        .filter(|f| !span.echelon().contains(sub, &alg.to_vec(f)))
        .count();
    let contains_code = missing == 0;
    if !contains_code {
        failures.push(format!("{missing} code generators outside the span"));
    }
    let kruskal = kruskal_bound(code)?;
    Ok(BasisReport {
        size: basis.len(),
        rank_one,
        independent,
        contains_code,
        kruskal,
        mtr: basis.len() == kruskal,
        failures,
    })
}
