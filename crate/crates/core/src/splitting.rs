//! Balanced k-splits of spanning trees and Monte Carlo estimation of the
//! probability that a uniform spanning tree admits one.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, largest_component, Graph};
use crate::par::Execution;
use crate::spanning::{
    for_each_spanning_tree, log_spanning_tree_count, sample_parents, trial_rng, SpanningTree,
    WilsonBuffers, NO_PARENT,
};

pub const DEFAULT_TARGET_SUCCESSES: u64 = 178;
pub const DEFAULT_TRIAL_CAP: u64 = 100_000_000;
/// Spanning-tree count above which exhaustive enumeration is refused.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;
/// Combinations of candidate cuts tried directly before switching to the DP.
const COMBINATION_LIMIT: u64 = 20_000;
const EXP_STREAM_SALT: u64 = 0x6a09_e667_f3bc_c908;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// Every part has exactly `n / k` vertices.
    Exact,
    /// Every part has `⌊n/k⌋` or `⌈n/k⌉` vertices.
    Near,
}

impl fmt::Display for SplitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitMode::Exact => "exact",
            SplitMode::Near => "near",
        })
    }
}

impl FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SplitMode::Exact),
            "near" => Ok(SplitMode::Near),
            _ => Err(Error::InvalidRule(format!(
                "unknown split mode {s:?} (expected exact or near)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BalanceRule {
    k: usize,
    mode: SplitMode,
}

impl BalanceRule {
    pub fn new(k: usize, mode: SplitMode) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidRule(format!("k must be at least 2, got {k}")));
        }
        Ok(BalanceRule { k, mode })
    }

    /// Exact when `k` divides `n`, near otherwise.
    pub fn default_for(n: usize, k: usize) -> Result<Self> {
        let mode = if k > 0 && n.is_multiple_of(k) {
            SplitMode::Exact
        } else {
            SplitMode::Near
        };
        BalanceRule::new(k, mode)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n < self.k {
            return Err(Error::InvalidRule(format!(
                "cannot split {n} vertices into {} parts",
                self.k
            )));
        }
        if self.mode == SplitMode::Exact && !n.is_multiple_of(self.k) {
            return Err(Error::InvalidRule(format!(
                "exact mode needs k | n, but {} does not divide {n}",
                self.k
            )));
        }
        Ok(())
    }

    /// Smallest and largest admissible part size for `n` vertices.
    pub fn part_size_range(&self, n: usize) -> (usize, usize) {
        let a = n / self.k;
        (a, if n.is_multiple_of(self.k) { a } else { a + 1 })
    }

    /// Whether `sizes` is an admissible partition of `n` vertices.
    pub fn accepts(&self, n: usize, sizes: &[usize]) -> bool {
        let (lo, hi) = self.part_size_range(n);
        sizes.len() == self.k
            && sizes.iter().sum::<usize>() == n
            && sizes.iter().all(|&s| (lo..=hi).contains(&s))
    }
}

/// Part-size targets for a fixed `n` and rule.
#[derive(Debug, Clone, Copy)]
struct Targets {
    n: usize,
    k: usize,
    a: usize,
    r: usize,
    exact: bool,
}

impl Targets {
    fn new(n: usize, rule: &BalanceRule) -> Self {
        Targets {
            n,
            k: rule.k,
            a: n / rule.k,
            r: n % rule.k,
            exact: rule.mode == SplitMode::Exact,
        }
    }

    fn max_part(&self) -> usize {
        if self.r == 0 {
            self.a
        } else {
            self.a + 1
        }
    }

    fn valid_part(&self, s: usize) -> bool {
        s == self.a || (self.r > 0 && s == self.a + 1)
    }

    /// Sizes a subtree can have if its parent edge is cut in a valid split:
    /// a union of `m` parts, `t` of which have the larger size.
    fn candidate_sizes(&self, table: &mut Vec<bool>) {
        table.clear();
        table.resize(self.n + 1, false);
        let (k, r) = (self.k, self.r);
        for m in 1..k {
            let t_lo = m.saturating_sub(k - r);
            for t in t_lo..=m.min(r) {
                table[m * self.a + t] = true;
            }
        }
    }
}

/// Reusable buffers for checking many rooted trees of the same size.
#[derive(Debug, Clone, Default)]
pub struct TreeScratch {
    child_offsets: Vec<u32>,
    children: Vec<u32>,
    preorder: Vec<u32>,
    tin: Vec<u32>,
    size: Vec<u32>,
    stack: Vec<u32>,
    candidate_size: Vec<bool>,
    candidates: Vec<u32>,
    chosen: Vec<u32>,
}

impl TreeScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds children lists, a preorder and subtree sizes; returns the root.
    fn load(&mut self, parents: &[u32]) -> u32 {
        let n = parents.len();
        self.child_offsets.clear();
        self.child_offsets.resize(n + 1, 0);
        let mut root = NO_PARENT;
        for (v, &p) in parents.iter().enumerate() {
            if p == NO_PARENT {
                root = v as u32;
            } else {
                self.child_offsets[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            self.child_offsets[i + 1] += self.child_offsets[i];
        }
        self.children.clear();
        self.children.resize(n.saturating_sub(1), 0);
        self.stack.clear();
        self.stack.extend_from_slice(&self.child_offsets[..n]);
        for (v, &p) in parents.iter().enumerate() {
            if p != NO_PARENT {
                let slot = &mut self.stack[p as usize];
                self.children[*slot as usize] = v as u32;
                *slot += 1;
            }
        }
        self.preorder.clear();
        self.tin.clear();
        self.tin.resize(n, 0);
        self.stack.clear();
        self.stack.push(root);
        while let Some(v) = self.stack.pop() {
            self.tin[v as usize] = self.preorder.len() as u32;
            self.preorder.push(v);
            let (lo, hi) = (
                self.child_offsets[v as usize] as usize,
                self.child_offsets[v as usize + 1] as usize,
            );
            self.stack.extend_from_slice(&self.children[lo..hi]);
        }
        self.size.clear();
        self.size.resize(n, 1);
        for &v in self.preorder.iter().rev() {
            let p = parents[v as usize];
            if p != NO_PARENT {
                self.size[p as usize] += self.size[v as usize];
            }
        }
        root
    }

    fn is_ancestor(&self, u: u32, v: u32) -> bool {
        let (tu, tv) = (self.tin[u as usize], self.tin[v as usize]);
        tu <= tv && tv < tu + self.size[u as usize]
    }

    /// Whether the tree given by `parents` (root maps to `u32::MAX`) admits
    /// a balanced split. The rule must be valid for `parents.len()`.
    pub fn is_splittable(&mut self, parents: &[u32], rule: &BalanceRule) -> bool {
        self.load(parents);
        let t = Targets::new(parents.len(), rule);
        if t.exact {
            return self.exact_count(&t) == t.k;
        }
        self.collect_candidates(&t, parents);
        if combinations(self.candidates.len() as u64, t.k as u64 - 1) <= COMBINATION_LIMIT {
            self.first_valid_combination(&t).is_some()
        } else {
            let forced = vec![0i8; t.n];
            self.dp_feasible(&t, &forced)
        }
    }

    fn exact_count(&self, t: &Targets) -> usize {
        let d = t.a as u32;
        self.size.iter().filter(|&&s| s % d == 0).count()
    }

    /// Non-root vertices whose parent edge could be a cut, ordered by the
    /// `(min, max)` key of that edge.
    fn collect_candidates(&mut self, t: &Targets, parents: &[u32]) {
        t.candidate_sizes(&mut self.candidate_size);
        self.candidates.clear();
        for (v, &p) in parents.iter().enumerate() {
            if p != NO_PARENT && self.candidate_size[self.size[v] as usize] {
                self.candidates.push(v as u32);
            }
        }
        self.candidates
            .sort_unstable_by_key(|&v| edge_key(v, parents[v as usize]));
    }

    /// First (k-1)-subset of candidates, in lexicographic order, whose cuts
    /// leave only admissible parts.
    fn first_valid_combination(&mut self, t: &Targets) -> Option<Vec<u32>> {
        let need = t.k - 1;
        if self.candidates.len() < need {
            return None;
        }
        let mut idx: Vec<usize> = (0..need).collect();
        loop {
            self.chosen.clear();
            self.chosen.extend(idx.iter().map(|&i| self.candidates[i]));
            if self.parts_valid(t) {
                return Some(self.chosen.clone());
            }
            // advance to the next combination
            let c = self.candidates.len();
            let mut i = need;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if idx[i] < c - need + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..need {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Checks the parts left by cutting above every vertex in `self.chosen`.
    fn parts_valid(&mut self, t: &Targets) -> bool {
        let mut cuts = std::mem::take(&mut self.chosen);
        cuts.sort_unstable_by_key(|&v| self.tin[v as usize]);
        let mut parts = vec![0i64; cuts.len()];
        let mut root_part = t.n as i64;
        let mut open: Vec<usize> = Vec::with_capacity(cuts.len());
        for (i, &w) in cuts.iter().enumerate() {
            while let Some(&j) = open.last() {
                if self.is_ancestor(cuts[j], w) {
                    break;
                }
                open.pop();
            }
            let s = self.size[w as usize] as i64;
            match open.last() {
                Some(&j) => parts[j] -= s,
                None => root_part -= s,
            }
            parts[i] = s;
            open.push(i);
        }
        let ok = t.valid_part(root_part as usize)
            && parts[..cuts.len()]
                .iter()
                .all(|&p| p > 0 && t.valid_part(p as usize));
        self.chosen = cuts;
        ok
    }

    /// Whether a valid split exists given per-vertex constraints on the edge
    /// to the parent: 1 forces a cut, -1 forbids one, 0 leaves it free.
    ///
    /// State per subtree: for each number `c` of parts already closed inside
    /// it, the bitset of achievable sizes of the part still containing the
    /// subtree root.
    fn dp_feasible(&self, t: &Targets, forced: &[i8]) -> bool {
        let max = t.max_part();
        let words = max / 64 + 1;
        let k = t.k;
        let mut states: Vec<Vec<u64>> = vec![Vec::new(); t.n];
        let mut contribution = vec![0u64; k * words];
        let mut merged = vec![0u64; k * words];
        for &v in self.preorder.iter().rev() {
            let mut st = vec![0u64; k * words];
            st[0] |= 1 << 1;
            let (lo, hi) = (
                self.child_offsets[v as usize] as usize,
                self.child_offsets[v as usize + 1] as usize,
            );
            for &u in &self.children[lo..hi] {
                let cs = std::mem::take(&mut states[u as usize]);
                contribution.iter_mut().for_each(|w| *w = 0);
                if forced[u as usize] != 1 {
                    contribution.copy_from_slice(&cs);
                    // an uncut child never contributes an empty open part
                    for c in 0..k {
                        contribution[c * words] &= !1;
                    }
                }
                if forced[u as usize] != -1 {
                    for c in 0..k - 1 {
                        let row = &cs[c * words..(c + 1) * words];
                        let closable = bit(row, t.a) || (t.r > 0 && bit(row, t.a + 1));
                        if closable {
                            contribution[(c + 1) * words] |= 1;
                        }
                    }
                }
                merged.iter_mut().for_each(|w| *w = 0);
                for c1 in 0..k {
                    let q = &contribution[c1 * words..(c1 + 1) * words];
                    for s in ones(q) {
                        for c0 in 0..k - c1 {
                            let (src, dst) = (c0 * words, (c0 + c1) * words);
                            shift_or(&st[src..src + words], s, &mut merged[dst..dst + words], max);
                        }
                    }
                }
                st.copy_from_slice(&merged);
            }
            states[v as usize] = st;
        }
        let root = self.preorder[0] as usize;
        let row = &states[root][(k - 1) * words..k * words];
        bit(row, t.a) || (t.r > 0 && bit(row, t.a + 1))
    }
}

fn edge_key(v: u32, p: u32) -> (u32, u32) {
    (v.min(p), v.max(p))
}

fn bit(row: &[u64], i: usize) -> bool {
    i / 64 < row.len() && row[i / 64] >> (i % 64) & 1 == 1
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

/// `dst |= src << s`, keeping bits `0..=max`.
fn shift_or(src: &[u64], s: usize, dst: &mut [u64], max: usize) {
    let (ws, bs) = (s / 64, s % 64);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bs);
        }
        dst[i] |= v;
    }
    let last = dst.len() - 1;
    let keep = max - last * 64;
    if keep < 63 {
        dst[last] &= (1u64 << (keep + 1)) - 1;
    }
}

fn combinations(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = match acc.checked_mul(n - i) {
            Some(x) => x / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

/// Lexicographically smallest set of `k - 1` tree edges whose removal leaves
/// `k` admissible parts, or `None` if the tree has no balanced split.
pub fn find_balanced_split(t: &SpanningTree, rule: &BalanceRule) -> Result<Option<Vec<(u32, u32)>>> {
    let n = t.n();
    rule.validate(n)?;
    let parents = t.parents(0);
    let mut sc = TreeScratch::new();
    sc.load(&parents);
    let tg = Targets::new(n, rule);
    let to_edges = |vs: &[u32]| {
        let mut e: Vec<(u32, u32)> = vs
            .iter()
            .map(|&v| edge_key(v, parents[v as usize]))
            .collect();
        e.sort_unstable();
        e
    };
    if tg.exact {
        if sc.exact_count(&tg) != tg.k {
            return Ok(None);
        }
        let d = tg.a as u32;
        let cuts: Vec<u32> = (0..n as u32)
            .filter(|&v| parents[v as usize] != NO_PARENT && sc.size[v as usize].is_multiple_of(d))
            .collect();
        return Ok(Some(to_edges(&cuts)));
    }
    sc.collect_candidates(&tg, &parents);
    if combinations(sc.candidates.len() as u64, tg.k as u64 - 1) <= COMBINATION_LIMIT {
        return Ok(sc.first_valid_combination(&tg).map(|c| to_edges(&c)));
    }
    // greedy over candidates in key order, each step keeping feasibility
    let mut forced = vec![-1i8; n];
    for &c in &sc.candidates {
        forced[c as usize] = 0;
    }
    if !sc.dp_feasible(&tg, &forced) {
        return Ok(None);
    }
    let mut cuts = Vec::with_capacity(tg.k - 1);
    for &c in &sc.candidates.clone() {
        if cuts.len() == tg.k - 1 {
            forced[c as usize] = -1;
            continue;
        }
        forced[c as usize] = 1;
        if sc.dp_feasible(&tg, &forced) {
            cuts.push(c);
        } else {
            forced[c as usize] = -1;
        }
    }
    Ok(Some(to_edges(&cuts)))
}

/// Whether `t` admits a balanced split under `rule`.
pub fn is_splittable(t: &SpanningTree, rule: &BalanceRule) -> Result<bool> {
    rule.validate(t.n())?;
    Ok(TreeScratch::new().is_splittable(&t.parents(0), rule))
}

/// Exact count of splittable spanning trees out of all spanning trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFraction {
    pub splittable: u64,
    pub total: u64,
}

impl SplitFraction {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.splittable, self.total)
    }

    pub fn as_f64(&self) -> f64 {
        self.splittable as f64 / self.total as f64
    }
}

/// Fraction of spanning trees of `g` with a balanced split, by enumeration.
pub fn splittable_fraction_exact(g: &Graph, rule: &BalanceRule) -> Result<SplitFraction> {
    rule.validate(g.n())?;
    let ln = log_spanning_tree_count(g)?;
    let too_many = |count: u128| Error::TooManySpanningTrees {
        count,
        limit: ENUMERATION_LIMIT as u128,
    };
    if ln > (ENUMERATION_LIMIT as f64).ln() + 1e-6 {
        return Err(too_many(ln.exp().round() as u128));
    }
    let edges = g.edges();
    let mut sc = TreeScratch::new();
    let mut splittable = 0u64;
    let total = for_each_spanning_tree(g, ENUMERATION_LIMIT + 1, |chosen| {
        let tree = SpanningTree::from_edges_unchecked(
            g.n(),
            chosen.iter().map(|&i| edges[i]).collect(),
        );
        if sc.is_splittable(&tree.parents(0), rule) {
            splittable += 1;
        }
    });
    if total > ENUMERATION_LIMIT {
        return Err(too_many(total as u128));
    }
    Ok(SplitFraction { splittable, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Successes over trials.
    Ratio,
    /// `(successes - 1)` over a sum of one unit exponential per trial.
    Gbas,
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(Estimator::Ratio),
            "gbas" => Ok(Estimator::Gbas),
            _ => Err(Error::InvalidArgument(format!(
                "unknown estimator {s:?} (expected ratio or gbas)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbasConfig {
    pub target_successes: u64,
    pub trial_cap: u64,
    pub seed: u64,
    pub execution: Execution,
}

impl GbasConfig {
    pub fn new(seed: u64) -> Self {
        GbasConfig {
            target_successes: DEFAULT_TARGET_SUCCESSES,
            trial_cap: DEFAULT_TRIAL_CAP,
            seed,
            execution: Execution::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.target_successes == 0 {
            return Err(Error::InvalidArgument("target successes must be at least 1".into()));
        }
        if self.trial_cap == 0 {
            return Err(Error::InvalidArgument("trial cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// Counts and both estimates from one run of Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbasOutcome {
    pub successes: u64,
    pub trials: u64,
    pub p_ratio: f64,
    pub p_gbas: f64,
}

/// Consumes outcomes strictly in trial order and applies the stopping rule.
struct Accumulator {
    target: u64,
    cap: u64,
    successes: u64,
    trials: u64,
    exp_sum: f64,
    exp_rng: ChaCha8Rng,
}

impl Accumulator {
    fn new(cfg: &GbasConfig) -> Self {
        Accumulator {
            target: cfg.target_successes,
            cap: cfg.trial_cap,
            successes: 0,
            trials: 0,
            exp_sum: 0.0,
            exp_rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ EXP_STREAM_SALT),
        }
    }

    /// Records one outcome; true once the run is over (target or cap).
    fn push(&mut self, success: bool) -> bool {
        self.trials += 1;
        let e: f64 = Exp1.sample(&mut self.exp_rng);
        self.exp_sum += e;
        if success {
            self.successes += 1;
        }
        self.done()
    }

    fn done(&self) -> bool {
        self.successes >= self.target || self.trials >= self.cap
    }

    fn finish(self) -> Result<GbasOutcome> {
        if self.successes < self.target {
            return Err(Error::TrialCapExceeded {
                cap: self.cap,
                successes: self.successes,
                trials: self.trials,
            });
        }
        Ok(GbasOutcome {
            successes: self.successes,
            trials: self.trials,
            p_ratio: self.successes as f64 / self.trials as f64,
            p_gbas: (self.successes - 1) as f64 / self.exp_sum,
        })
    }
}

/// Runs `oracle(i)` for `i = 0, 1, ...` until `target_successes` successes.
pub fn gbas_estimate<F: FnMut(u64) -> bool>(mut oracle: F, cfg: &GbasConfig) -> Result<GbasOutcome> {
    cfg.validate()?;
    let mut acc = Accumulator::new(cfg);
    let mut i = 0;
    while !acc.push(oracle(i)) {
        i += 1;
    }
    acc.finish()
}

/// Like [`gbas_estimate`], evaluating trials in speculative batches under
/// `cfg.execution`. Outcomes are consumed in index order, so the result is
/// identical to the sequential run.
pub fn gbas_estimate_with<S, I, F>(init: I, oracle: F, cfg: &GbasConfig) -> Result<GbasOutcome>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> bool + Sync + Send,
{
    cfg.validate()?;
    if cfg.execution == Execution::Sequential {
        let mut state = init();
        return gbas_estimate(|i| oracle(&mut state, i), cfg);
    }
    let mut acc = Accumulator::new(cfg);
    let mut batch = 64u64;
    while !acc.done() {
        let start = acc.trials;
        let remaining = acc.target - acc.successes;
        if acc.successes > 0 {
            // enough for the expected remaining trials, with some slack
            let rate = acc.successes as f64 / acc.trials as f64;
            let expected = (remaining as f64 / rate * 1.1).ceil() as u64;
            batch = expected.clamp(64, 1 << 16);
        } else if start > 0 {
            batch = (batch * 2).min(1 << 16);
        }
        let end = start + batch.min(cfg.trial_cap - start);
        let outcomes = cfg.execution.map_init(start..end, &init, &oracle);
        for ok in outcomes {
            if acc.push(ok) {
                break;
            }
        }
    }
    acc.finish()
}

/// One row of splittability output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitEstimate {
    pub graph_label: String,
    pub n: usize,
    pub k: usize,
    pub successes: u64,
    pub trials: u64,
    /// Ratio estimate `successes / trials`.
    pub p_hat: f64,
    pub p_gbas: f64,
    pub seed: u64,
}

impl SplitEstimate {
    pub fn p(&self, estimator: Estimator) -> f64 {
        match estimator {
            Estimator::Ratio => self.p_hat,
            Estimator::Gbas => self.p_gbas,
        }
    }
}

/// Estimates the probability that a uniform spanning tree of `g` (its
/// largest component, if disconnected) splits into `k` balanced parts.
/// `mode = None` picks exact or near by divisibility.
pub fn estimate_splittability(
    g: &Graph,
    label: &str,
    k: usize,
    mode: Option<SplitMode>,
    cfg: &GbasConfig,
) -> Result<SplitEstimate> {
    let owned;
    let h = if connected_components(g).is_connected() {
        g
    } else {
        owned = largest_component(g)?;
        &owned
    };
    let n = h.n();
    let rule = match mode {
        Some(m) => BalanceRule::new(k, m)?,
        None => BalanceRule::default_for(n, k)?,
    };
    rule.validate(n)?;
    let seed = cfg.seed;
    let outcome = gbas_estimate_with(
        || (WilsonBuffers::new(n), TreeScratch::new()),
        |(buf, sc), i| {
            let mut rng = trial_rng(seed, i);
            sample_parents(h, 0, &mut rng, buf);
            sc.is_splittable(buf.parents(), &rule)
        },
        cfg,
    )?;
    Ok(SplitEstimate {
        graph_label: label.to_string(),
        n,
        k,
        successes: outcome.successes,
        trials: outcome.trials,
        p_hat: outcome.p_ratio,
        p_gbas: outcome.p_gbas,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(n: usize) -> SpanningTree {
        SpanningTree::from_edges_unchecked(n, (0..n as u32 - 1).map(|i| (i, i + 1)).collect())
    }

    fn rule(k: usize, mode: SplitMode) -> BalanceRule {
        BalanceRule::new(k, mode).unwrap()
    }

    #[test]
    fn path_of_four_cuts_the_middle() {
        let cut = find_balanced_split(&path_tree(4), &rule(2, SplitMode::Exact)).unwrap();
        assert_eq!(cut, Some(vec![(1, 2)]));
    }

    #[test]
    fn star_has_no_near_split() {
        let star = SpanningTree::from_edges_unchecked(4, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(find_balanced_split(&star, &rule(2, SplitMode::Near)).unwrap(), None);
    }

    #[test]
    fn path_of_nine_in_three() {
        // vertices 0..9 here correspond to labels 1..9
        let cut = find_balanced_split(&path_tree(9), &rule(3, SplitMode::Exact)).unwrap();
        assert_eq!(cut, Some(vec![(2, 3), (5, 6)]));
    }

    #[test]
    fn near_split_is_lexicographically_smallest() {
        // path of 5, k=2: cuts (1,2) and (2,3) both give sizes {2,3}
        let cut = find_balanced_split(&path_tree(5), &rule(2, SplitMode::Near)).unwrap();
        assert_eq!(cut, Some(vec![(1, 2)]));
    }

    #[test]
    fn exact_mode_rejects_indivisible_n() {
        let err = find_balanced_split(&path_tree(5), &rule(2, SplitMode::Exact)).unwrap_err();
        assert!(matches!(err, Error::InvalidRule(_)));
        assert!(BalanceRule::new(1, SplitMode::Near).is_err());
    }

    #[test]
    fn fractions_for_small_graphs() {
        let k4 = Graph::from_edges(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v)))).unwrap();
        let f = splittable_fraction_exact(&k4, &rule(2, SplitMode::Exact)).unwrap();
        assert_eq!((f.splittable, f.total), (12, 16));
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let f = splittable_fraction_exact(&c6, &rule(2, SplitMode::Exact)).unwrap();
        assert_eq!(f.ratio(), Ratio::new(1, 1));
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let f = splittable_fraction_exact(&star, &rule(2, SplitMode::Near)).unwrap();
        assert_eq!(f.splittable, 0);
    }

    #[test]
    fn enumeration_refuses_large_graphs() {
        let n = 12;
        let kn = Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap();
        assert!(matches!(
            splittable_fraction_exact(&kn, &rule(2, SplitMode::Exact)),
            Err(Error::TooManySpanningTrees { .. })
        ));
    }

    #[test]
    fn always_true_oracle() {
        let out = gbas_estimate(|_| true, &GbasConfig::new(1)).unwrap();
        assert_eq!((out.successes, out.trials, out.p_ratio), (178, 178, 1.0));
    }

    #[test]
    fn trial_cap_reports_partial_counts() {
        let mut cfg = GbasConfig::new(1);
        cfg.trial_cap = 50;
        let err = gbas_estimate(|i| i % 10 == 0, &cfg).unwrap_err();
        match err {
            Error::TrialCapExceeded { cap, successes, trials } => {
                assert_eq!((cap, successes, trials), (50, 5, 50));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn batched_run_matches_sequential() {
        let oracle = |_: &mut (), i: u64| (i * 2_654_435_761) % 7 < 2;
        let mut cfg = GbasConfig::new(3);
        cfg.execution = Execution::Sequential;
        let a = gbas_estimate_with(|| (), oracle, &cfg).unwrap();
        cfg.execution = Execution::Parallel;
        let b = gbas_estimate_with(|| (), oracle, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cycle_estimate_is_one() {
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let est = estimate_splittability(&c6, "c6", 2, None, &GbasConfig::new(9)).unwrap();
        assert_eq!((est.trials, est.p_hat), (178, 1.0));
    }

    #[test]
    fn dp_agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sc = TreeScratch::new();
        for _ in 0..300 {
            let n = rng.random_range(4..40usize);
            let parents: Vec<u32> = (0..n)
                .map(|v| if v == 0 { NO_PARENT } else { rng.random_range(0..v) as u32 })
                .collect();
            for k in 2..=4.min(n) {
                for mode in [SplitMode::Exact, SplitMode::Near] {
                    let r = rule(k, mode);
                    if r.validate(n).is_err() {
                        continue;
                    }
                    sc.load(&parents);
                    let t = Targets::new(n, &r);
                    sc.collect_candidates(&t, &parents);
                    let by_combo = sc.first_valid_combination(&t).is_some();
                    let by_dp = sc.dp_feasible(&t, &vec![0; n]);
                    assert_eq!(by_combo, by_dp, "n={n} k={k} {mode}");
                    assert_eq!(sc.is_splittable(&parents, &r), by_dp);
                }
            }
        }
    }
}
