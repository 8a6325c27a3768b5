//! Bounded checkers for the local criteria: diamonds, random descent,
//! confluence variants and strategy comparison.
//!
//! Universal properties are checked exhaustively up to a depth. The
//! existential ones (local random descent, locally-better) are checked in
//! their per-step form: for every `k` some pair of `k`-step reducts must
//! compare well. Since every `k`-step reduct is enumerated, a failure at some
//! `k` is conclusive unless the enumeration was truncated.

pub mod random;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::rc::Rc;
use alloc::vec::Vec;

use crate::engine::{reachable, successors, Rewrite, MD};
use crate::multidist::{MultiDistribution, Relation, SubDistribution};
use crate::prob::Prob;

/// What a checker looks at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Observation {
    /// The subdistribution over normal forms.
    Nf,
    /// The probability of being in normal form.
    NNorm,
}

impl Observation {
    pub fn name(self) -> &'static str {
        match self {
            Observation::Nf => "nf",
            Observation::NNorm => "nnorm",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "nf" => Some(Observation::Nf),
            "nnorm" | "norm" => Some(Observation::NNorm),
            _ => None,
        }
    }

    pub fn observe<R: Rewrite>(self, sys: &R, m: &MD<R>) -> Observed<R::Elem> {
        match self {
            Observation::Nf => Observed::Nf(m.nf(|e| sys.is_normal(e))),
            Observation::NNorm => Observed::NNorm(m.nnorm(|e| sys.is_normal(e))),
        }
    }
}

/// An observed value; ordered pointwise (`Nf`) or numerically (`NNorm`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Observed<E: Ord> {
    Nf(SubDistribution<E>),
    NNorm(Prob),
}

impl<E: Ord + Clone> Observed<E> {
    pub fn compare(&self, other: &Self) -> Relation {
        match (self, other) {
            (Observed::Nf(a), Observed::Nf(b)) => a.pointwise_cmp(b),
            (Observed::NNorm(a), Observed::NNorm(b)) => Relation::from_bounds(a <= b, a >= b),
            _ => Relation::Incomparable,
        }
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.compare(other).is_leq()
    }
}

impl<E: Ord + core::fmt::Display> core::fmt::Display for Observed<E> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Observed::Nf(d) => write!(f, "{d}"),
            Observed::NNorm(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    /// No counterexample up to the depth.
    Holds,
    Refuted,
    /// The enumeration was truncated before anything was found.
    Unresolved,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Refuted => "refuted",
            Outcome::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessKind {
    /// Two one-step reducts of the source observe differently.
    ObsMismatch,
    /// Two distinct one-step reducts have no common successor.
    NoJoin,
    /// Two reducts at the same depth observe differently.
    GlobalMismatch,
    /// No pair of extensions of the two reducts observes equally at `step`.
    NoEqualExtension,
    /// No extension of the left side dominates the right side.
    NoDominatingExtension,
    /// No extension pair observes equally.
    NoObsJoin,
    /// The two sides share no reduct.
    NoCommonReduct,
    /// The better strategy's extensions stay below the other's at `step`.
    NotBetter,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 8] = [
        WitnessKind::ObsMismatch,
        WitnessKind::NoJoin,
        WitnessKind::GlobalMismatch,
        WitnessKind::NoEqualExtension,
        WitnessKind::NoDominatingExtension,
        WitnessKind::NoObsJoin,
        WitnessKind::NoCommonReduct,
        WitnessKind::NotBetter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::ObsMismatch => "obs-mismatch",
            WitnessKind::NoJoin => "no-join",
            WitnessKind::GlobalMismatch => "global-mismatch",
            WitnessKind::NoEqualExtension => "no-equal-extension",
            WitnessKind::NoDominatingExtension => "no-dominating-extension",
            WitnessKind::NoObsJoin => "no-obs-join",
            WitnessKind::NoCommonReduct => "no-common-reduct",
            WitnessKind::NotBetter => "not-better",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == text)
    }
}

/// A counterexample. `left` and `right` are reducts of `source`; `step`
/// counts steps from `source` at which the failure shows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness<E: Ord> {
    pub kind: WitnessKind,
    pub observation: Observation,
    pub source: MultiDistribution<E>,
    pub left: MultiDistribution<E>,
    pub right: MultiDistribution<E>,
    pub step: usize,
    pub left_obs: Observed<E>,
    pub right_obs: Observed<E>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckVerdict<E: Ord> {
    pub outcome: Outcome,
    /// A refutation that no deeper search can overturn.
    pub conclusive: bool,
    pub depth: usize,
    pub witness: Option<Witness<E>>,
    pub truncated: bool,
}

impl<E: Ord> CheckVerdict<E> {
    pub(crate) fn finish(depth: usize, truncated: bool) -> Self {
        let outcome = if truncated { Outcome::Unresolved } else { Outcome::Holds };
        CheckVerdict { outcome, conclusive: false, depth, witness: None, truncated }
    }

    pub(crate) fn refuted(depth: usize, witness: Witness<E>, conclusive: bool, truncated: bool) -> Self {
        CheckVerdict { outcome: Outcome::Refuted, conclusive, depth, witness: Some(witness), truncated }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }
}

pub(crate) fn witness<R: Rewrite>(
    sys: &R,
    kind: WitnessKind,
    obs: Observation,
    source: &MD<R>,
    left: &MD<R>,
    right: &MD<R>,
    step: usize,
) -> Witness<R::Elem> {
    Witness {
        kind,
        observation: obs,
        source: source.clone(),
        left: left.clone(),
        right: right.clone(),
        step,
        left_obs: obs.observe(sys, left),
        right_obs: obs.observe(sys, right),
    }
}

/// Non-normal elements among `elements`, as unit starts.
fn pointed_starts<R: Rewrite>(sys: &R, elements: &[R::Elem]) -> Vec<MD<R>> {
    elements.iter().filter(|e| !sys.is_normal(e)).map(|e| MultiDistribution::unit(e.clone())).collect()
}

/// Diamond at a single start: every pair of one-step reducts observes equally
/// and, unless equal, has a common one-step reduct.
pub fn check_diamond<R: Rewrite>(sys: &R, m: &MD<R>, obs: Observation, cap: usize) -> CheckVerdict<R::Elem> {
    let succ = successors(sys, m, cap);
    let mut truncated = succ.truncated;
    let states = &succ.states;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let (t, s) = (&states[i], &states[j]);
            if obs.observe(sys, t) != obs.observe(sys, s) {
                let w = witness(sys, WitnessKind::ObsMismatch, obs, m, t, s, 1);
                return CheckVerdict::refuted(1, w, true, truncated);
            }
            let left = successors(sys, t, cap);
            let right = successors(sys, s, cap);
            let lt = left.truncated || right.truncated;
            truncated |= lt;
            let left: BTreeSet<_> = left.states.into_iter().collect();
            if !right.states.iter().any(|u| left.contains(u)) && !lt {
                let w = witness(sys, WitnessKind::NoJoin, obs, m, t, s, 2);
                return CheckVerdict::refuted(1, w, true, truncated);
            }
        }
    }
    CheckVerdict::finish(1, truncated)
}

/// Pointed diamond: [`check_diamond`] at `[1 a]` for every non-normal `a`.
pub fn check_pointed_diamond<R: Rewrite>(sys: &R, elements: &[R::Elem], obs: Observation, cap: usize) -> CheckVerdict<R::Elem> {
    let mut truncated = false;
    for m in pointed_starts(sys, elements) {
        let v = check_diamond(sys, &m, obs, cap);
        if v.is_refuted() {
            return v;
        }
        truncated |= v.truncated;
    }
    CheckVerdict::finish(1, truncated)
}

fn observed_level<R: Rewrite>(sys: &R, level: &[MD<R>], obs: Observation) -> BTreeSet<Observed<R::Elem>> {
    level.iter().map(|m| obs.observe(sys, m)).collect()
}

/// Pointed local random descent: for every divergence `t ⇚ [1 a] ⇛ s` and
/// every `k <= depth`, some `k`-step reducts of `t` and `s` observe equally.
pub fn check_local_rd<R: Rewrite>(
    sys: &R,
    elements: &[R::Elem],
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<R::Elem> {
    let mut truncated = false;
    for m in pointed_starts(sys, elements) {
        let succ = successors(sys, &m, cap);
        truncated |= succ.truncated;
        let states = &succ.states;
        let levels: Vec<_> = states
            .iter()
            .map(|t| {
                let l = reachable(sys, t.clone(), depth, cap);
                truncated |= l.truncated;
                l.levels.iter().map(|lv| observed_level(sys, lv, obs)).collect::<Vec<_>>()
            })
            .collect();
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                for (k, (a, b)) in levels[i].iter().zip(&levels[j]).enumerate() {
                    if a.is_disjoint(b) {
                        let w = witness(sys, WitnessKind::NoEqualExtension, obs, &m, &states[i], &states[j], k + 1);
                        return CheckVerdict::refuted(depth, w, !truncated, truncated);
                    }
                }
            }
        }
    }
    CheckVerdict::finish(depth, truncated)
}

impl<E: Ord + Clone> Observed<E> {
    fn nothing(obs: Observation) -> Self {
        match obs {
            Observation::Nf => Observed::Nf(SubDistribution::empty()),
            Observation::NNorm => Observed::NNorm(Prob::zero()),
        }
    }

    /// `self + q·other`; both are observations of parts of one state.
    fn add_scaled(&self, q: &Prob, other: &Self) -> Self {
        match (self, other) {
            (Observed::Nf(a), Observed::Nf(b)) => {
                let pairs = a.iter().map(|(e, p)| (e.clone(), p.clone())).chain(b.iter().map(|(e, p)| (e.clone(), q * p)));
                Observed::Nf(SubDistribution::from_entries(pairs).expect("parts of one state"))
            }
            (Observed::NNorm(a), Observed::NNorm(b)) => Observed::NNorm(a.checked_add(&(q * b)).expect("parts of one state")),
            _ => unreachable!("one observation kind per check"),
        }
    }
}

/// How to build one reduct: a unit, or a weighted sum of reducts.
enum Recipe<E> {
    Unit(E),
    Mix(Parts<E>),
}

impl<E: Ord + Clone> Recipe<E> {
    fn build(&self) -> MultiDistribution<E> {
        match self {
            Recipe::Unit(a) => MultiDistribution::unit(a.clone()),
            Recipe::Mix(parts) => {
                let scaled: Vec<_> = parts.iter().map(|(q, r)| r.build().scale(q)).collect();
                MultiDistribution::sum(&scaled).expect("parts of one state")
            }
        }
    }
}

/// One recipe per distinct observation among the `k`-step reducts of a start.
type ObsSet<E> = BTreeMap<Observed<E>, Rc<Recipe<E>>>;

/// Weighted parts of a sum under construction.
type Parts<E> = Vec<(Prob, Rc<Recipe<E>>)>;

/// `k`-step observation sets of unit starts, memoized by `(element, k)`.
///
/// A lifted step rewrites every occurrence independently, so the `k`-step
/// reducts of `Σ p_i·[1 a_i]` are exactly the sums `Σ p_i·u_i` with `u_i` a
/// `k`-step reduct of `[1 a_i]`. Both observations are linear, so the
/// observation of such a sum is computed from those of its parts and one
/// representative per observation suffices.
struct ObsLevels<'s, R: Rewrite> {
    sys: &'s R,
    obs: Observation,
    cap: usize,
    memo: BTreeMap<(R::Elem, usize), ObsSet<R::Elem>>,
    truncated: bool,
}

impl<'s, R: Rewrite> ObsLevels<'s, R> {
    fn of_element(&mut self, a: &R::Elem, k: usize) -> ObsSet<R::Elem> {
        if k == 0 || self.sys.is_normal(a) {
            let o = self.obs.observe(self.sys, &MultiDistribution::unit(a.clone()));
            return BTreeMap::from([(o, Rc::new(Recipe::Unit(a.clone())))]);
        }
        let key = (a.clone(), k);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = BTreeMap::new();
        for rhs in self.sys.rules(a) {
            let parts: Vec<_> = rhs.iter().map(|(b, q)| (q.clone(), self.of_element(b, k - 1))).collect();
            for (o, r) in self.mix(parts) {
                self.insert(&mut out, o, r);
            }
        }
        self.memo.insert(key, out.clone());
        out
    }

    fn of_state(&mut self, m: &MD<R>, k: usize) -> ObsSet<R::Elem> {
        let parts: Vec<_> = m.iter().map(|(a, p)| (p.clone(), self.of_element(a, k))).collect();
        self.mix(parts)
    }

    fn insert(&mut self, set: &mut ObsSet<R::Elem>, o: Observed<R::Elem>, r: Rc<Recipe<R::Elem>>) {
        if set.len() >= self.cap && !set.contains_key(&o) {
            self.truncated = true;
        } else {
            set.entry(o).or_insert(r);
        }
    }

    /// Observations of `Σ q_i·u_i` over all choices of `u_i` from the parts.
    fn mix(&mut self, parts: Vec<(Prob, ObsSet<R::Elem>)>) -> ObsSet<R::Elem> {
        let mut acc = alloc::vec![(Observed::nothing(self.obs), Parts::<R::Elem>::new())];
        for (q, set) in parts {
            let mut next: BTreeMap<Observed<R::Elem>, Parts<R::Elem>> = BTreeMap::new();
            for (o, recipe) in &acc {
                for (o2, r) in &set {
                    let sum = o.add_scaled(&q, o2);
                    if next.len() >= self.cap && !next.contains_key(&sum) {
                        self.truncated = true;
                        continue;
                    }
                    next.entry(sum).or_insert_with(|| {
                        let mut recipe = recipe.clone();
                        recipe.push((q.clone(), r.clone()));
                        recipe
                    });
                }
            }
            acc = next.into_iter().collect();
        }
        acc.into_iter().map(|(o, parts)| (o, Rc::new(Recipe::Mix(parts)))).collect()
    }
}

/// Global random descent from `m0`: all reducts at the same depth observe
/// equally. `cap` bounds the number of distinct observations kept per set.
pub fn check_rd_global<R: Rewrite>(sys: &R, m0: &MD<R>, obs: Observation, depth: usize, cap: usize) -> CheckVerdict<R::Elem> {
    let mut levels = ObsLevels { sys, obs, cap: cap.max(2), memo: BTreeMap::new(), truncated: false };
    for k in 0..=depth {
        let set = levels.of_state(m0, k);
        let mut reps = set.values();
        if let (Some(first), Some(other)) = (reps.next(), reps.next()) {
            let w = witness(sys, WitnessKind::GlobalMismatch, obs, m0, &first.build(), &other.build(), k);
            return CheckVerdict::refuted(depth, w, true, levels.truncated);
        }
    }
    CheckVerdict::finish(depth, levels.truncated)
}

/// Which confluence variant [`check_confluence`] tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Confluence {
    /// A common reduct.
    Plain,
    /// Reducts with equal observation.
    Observed,
    /// An extension of the left side observes at least the right side.
    Skew,
}

impl Confluence {
    fn kind(self) -> WitnessKind {
        match self {
            Confluence::Plain => WitnessKind::NoCommonReduct,
            Confluence::Observed => WitnessKind::NoObsJoin,
            Confluence::Skew => WitnessKind::NoDominatingExtension,
        }
    }
}

/// Every state reachable from `m` in at most `depth` steps.
fn closure<R: Rewrite>(sys: &R, m: &MD<R>, depth: usize, cap: usize) -> (BTreeSet<MD<R>>, bool) {
    let l = reachable(sys, m.clone(), depth, cap);
    (l.levels.into_iter().flatten().collect(), l.truncated)
}

/// No extension of `s` can reach `obs(r)`: some normal form already carries
/// more mass in `r` than `s` has there plus everything not yet normal.
fn beyond_reach<R: Rewrite>(sys: &R, s: &MD<R>, r: &MD<R>, obs: Observation) -> bool {
    if obs != Observation::Nf {
        return false;
    }
    let is_normal = |e: &R::Elem| sys.is_normal(e);
    let (nf_s, nf_r) = (s.nf(is_normal), r.nf(is_normal));
    let slack = s.residual(is_normal);
    let out_of_reach = nf_r.iter().any(|(u, p)| p.as_rational() > &(nf_s.get(u).into_rational() + slack.as_rational()));
    out_of_reach
}

/// Bounded confluence from `m0`: for all `s, r` reachable within `depth`,
/// look for the required joins among reducts within `depth` further steps.
/// For `Skew` with `nf`, a failure is conclusive when `r` is out of reach of
/// every extension of `s`.
pub fn check_confluence<R: Rewrite>(
    sys: &R,
    m0: &MD<R>,
    variant: Confluence,
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<R::Elem> {
    let (reach, mut truncated) = closure(sys, m0, depth, cap);
    let reach: Vec<_> = reach.into_iter().collect();
    let mut ext = alloc::collections::BTreeMap::new();
    let mut extension = |m: &MD<R>, truncated: &mut bool| -> BTreeSet<MD<R>> {
        ext.entry(m.clone())
            .or_insert_with(|| {
                let (c, t) = closure(sys, m, depth, cap);
                *truncated |= t;
                c
            })
            .clone()
    };
    for s in &reach {
        for r in &reach {
            if s == r {
                continue;
            }
            let es = extension(s, &mut truncated);
            let ok = match variant {
                Confluence::Plain => {
                    let er = extension(r, &mut truncated);
                    es.iter().any(|u| er.contains(u))
                }
                Confluence::Observed => {
                    let er = extension(r, &mut truncated);
                    let os: BTreeSet<_> = es.iter().map(|u| obs.observe(sys, u)).collect();
                    er.iter().any(|u| os.contains(&obs.observe(sys, u)))
                }
                Confluence::Skew => {
                    let target = obs.observe(sys, r);
                    es.iter().any(|u| target.leq(&obs.observe(sys, u)))
                }
            };
            if !ok {
                let conclusive = variant == Confluence::Skew && beyond_reach(sys, s, r, obs);
                let w = witness(sys, variant.kind(), obs, m0, s, r, depth);
                return CheckVerdict::refuted(depth, w, conclusive, truncated);
            }
        }
    }
    CheckVerdict::finish(depth, truncated)
}

/// Skew-confluence, the weakest of the three variants.
pub fn check_skew_confluence<R: Rewrite>(
    sys: &R,
    m0: &MD<R>,
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<R::Elem> {
    check_confluence(sys, m0, Confluence::Skew, obs, depth, cap)
}

/// `Some(true)` when some pair of `left`/`right` observations has
/// `left >= right`.
fn some_dominates<E: Ord + Clone>(obs: Observation, left: &BTreeSet<Observed<E>>, right: &BTreeSet<Observed<E>>) -> bool {
    match obs {
        // totally ordered: compare the best left value with the worst right one
        Observation::NNorm => match (left.last(), right.first()) {
            (Some(l), Some(r)) => r.leq(l),
            _ => false,
        },
        Observation::Nf => left.iter().any(|l| right.iter().any(|r| r.leq(l))),
    }
}

/// Locally-better: for every `t` (one `better` step from `[1 a]`) and `s`
/// (one `other` step), and every `k <= depth`, some `k`-step `other`-reduct of
/// `t` observes at least some `k`-step `better`-reduct of `s`.
///
/// Both relations must share elements and normal forms.
pub fn check_locally_better<S, R>(
    better: &S,
    other: &R,
    elements: &[S::Elem],
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<S::Elem>
where
    S: Rewrite,
    R: Rewrite<Elem = S::Elem>,
{
    let mut truncated = false;
    for m in pointed_starts(better, elements) {
        let ts = successors(better, &m, cap);
        let ss = successors(other, &m, cap);
        truncated |= ts.truncated || ss.truncated;
        for t in &ts.states {
            let tl = reachable(other, t.clone(), depth, cap);
            truncated |= tl.truncated;
            for s in &ss.states {
                let sl = reachable(better, s.clone(), depth, cap);
                truncated |= sl.truncated;
                for k in 0..=depth {
                    let left = observed_level(other, &tl.levels[k], obs);
                    let right = observed_level(better, &sl.levels[k], obs);
                    if !some_dominates(obs, &left, &right) {
                        let w = witness(better, WitnessKind::NotBetter, obs, &m, t, s, k + 1);
                        return CheckVerdict::refuted(depth, w, !truncated, truncated);
                    }
                }
            }
        }
    }
    CheckVerdict::finish(depth, truncated)
}

/// Global better from `m0`: every `k`-step `better`-reduct observes at least
/// every `k`-step `other`-reduct, for `k <= depth`.
pub fn check_better_global<S, R>(
    better: &S,
    other: &R,
    m0: &MD<S>,
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<S::Elem>
where
    S: Rewrite,
    R: Rewrite<Elem = S::Elem>,
{
    let bl = reachable(better, m0.clone(), depth, cap);
    let ol = reachable(other, m0.clone(), depth, cap);
    let truncated = bl.truncated || ol.truncated;
    for k in 0..=depth {
        for u in &bl.levels[k] {
            let ou = obs.observe(better, u);
            if let Some(r) = ol.levels[k].iter().find(|r| !obs.observe(other, r).leq(&ou)) {
                let w = witness(better, WitnessKind::NotBetter, obs, m0, u, r, k);
                return CheckVerdict::refuted(depth, w, true, truncated);
            }
        }
    }
    CheckVerdict::finish(depth, truncated)
}

impl<E: Ord + Clone + core::fmt::Debug> Witness<E> {
    /// Re-evaluates a single-relation witness against `sys`: the reducts must
    /// be where the witness says and the failure must recur.
    pub fn replay<R: Rewrite<Elem = E>>(&self, sys: &R, cap: usize) -> bool {
        let obs = self.observation;
        if obs.observe(sys, &self.left) != self.left_obs || obs.observe(sys, &self.right) != self.right_obs {
            return false;
        }
        let one_step = || {
            let succ = successors(sys, &self.source, cap).states;
            succ.contains(&self.left) && succ.contains(&self.right)
        };
        match self.kind {
            WitnessKind::ObsMismatch => one_step() && self.left_obs != self.right_obs,
            WitnessKind::NoJoin => {
                let l: BTreeSet<_> = successors(sys, &self.left, cap).states.into_iter().collect();
                one_step() && self.left != self.right && !successors(sys, &self.right, cap).states.iter().any(|u| l.contains(u))
            }
            WitnessKind::GlobalMismatch => {
                let level = reachable(sys, self.source.clone(), self.step, cap);
                let level = &level.levels[self.step];
                level.contains(&self.left) && level.contains(&self.right) && self.left_obs != self.right_obs
            }
            WitnessKind::NoEqualExtension => {
                let k = self.step.saturating_sub(1);
                let l = reachable(sys, self.left.clone(), k, cap);
                let r = reachable(sys, self.right.clone(), k, cap);
                one_step() && observed_level(sys, &l.levels[k], obs).is_disjoint(&observed_level(sys, &r.levels[k], obs))
            }
            WitnessKind::NoDominatingExtension | WitnessKind::NoObsJoin | WitnessKind::NoCommonReduct => {
                let variant = match self.kind {
                    WitnessKind::NoCommonReduct => Confluence::Plain,
                    WitnessKind::NoObsJoin => Confluence::Observed,
                    _ => Confluence::Skew,
                };
                let (reach, _) = closure(sys, &self.source, self.step, cap);
                if !reach.contains(&self.left) || !reach.contains(&self.right) {
                    return false;
                }
                let (es, _) = closure(sys, &self.left, self.step, cap);
                let (er, _) = closure(sys, &self.right, self.step, cap);
                match variant {
                    Confluence::Plain => !es.iter().any(|u| er.contains(u)),
                    Confluence::Observed => {
                        let os: BTreeSet<_> = es.iter().map(|u| obs.observe(sys, u)).collect();
                        !er.iter().any(|u| os.contains(&obs.observe(sys, u)))
                    }
                    Confluence::Skew => !es.iter().any(|u| self.right_obs.leq(&obs.observe(sys, u))),
                }
            }
            WitnessKind::NotBetter => false,
        }
    }

    /// Re-evaluates a locally-better witness.
    pub fn replay_better<S, R>(&self, better: &S, other: &R, cap: usize) -> bool
    where
        S: Rewrite<Elem = E>,
        R: Rewrite<Elem = E>,
    {
        if self.kind != WitnessKind::NotBetter {
            return false;
        }
        let obs = self.observation;
        if !successors(better, &self.source, cap).states.contains(&self.left)
            || !successors(other, &self.source, cap).states.contains(&self.right)
        {
            return false;
        }
        let k = self.step.saturating_sub(1);
        let tl = reachable(other, self.left.clone(), k, cap);
        let sl = reachable(better, self.right.clone(), k, cap);
        !some_dominates(obs, &observed_level(other, &tl.levels[k], obs), &observed_level(better, &sl.levels[k], obs))
    }
}
