//! The reduction relation on configurations.
//!
//! Two kinds of step exist. An *interaction* rewrites an equation whose both
//! sides are agent terms (an active pair) with the rule for that agent pair,
//! freshly renaming the rule's names. An *indirection* eliminates an
//! equation `x = u` by substituting `u` for the other occurrence of the
//! internal name `x`. Indirections are administrative and are resolved to
//! fixpoint after every interaction, in ascending equation-index order, so
//! one engine step is "one interaction plus its indirection fallout". An
//! equation `t = x` with `x` occurring inside `t` (including `x = x`) is a
//! deadlock: it is left inert and reported, and reduction continues
//! elsewhere.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ast::{Configuration, Equation, NameId, NamePool, Signature, Term};
use crate::canon::{canonical_form, CanonError, CanonicalKey};
use crate::rule::{InteractionSystem, RuleKey};

/// Redex selection policy. Every strategy is deterministic; `Random` is
/// fully determined by its seed. Interaction counts and final α-classes of
/// terminating configurations do not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Oldest equation first (by insertion order).
    Fifo,
    /// Newest equation first (by insertion order).
    Lifo,
    /// Lowest current equation index first.
    ByIndex,
    /// Uniformly random among the available interaction redexes.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// An equation whose two sides are agents with a rule for their pair.
/// `flipped` records that the rule's alpha agent sits on the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteractionRedex {
    pub index: usize,
    pub key: RuleKey,
    pub flipped: bool,
}

/// An equation `x = u` (either orientation) with internal `x` whose other
/// occurrence lives in equation `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndirectionRedex {
    pub index: usize,
    pub name_side: Side,
    pub target: usize,
}

/// Complete classification of a configuration's equations. The five lists
/// are pairwise disjoint and together cover every equation index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RedexReport {
    pub interactions: Vec<InteractionRedex>,
    pub indirections: Vec<IndirectionRedex>,
    pub deadlocks: Vec<usize>,
    pub answers: Vec<usize>,
    pub norule: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Interaction,
    Indirection,
}

/// Record of one applied step, sufficient to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepInfo {
    pub kind: StepKind,
    pub rule: Option<RuleKey>,
    pub equation: usize,
    pub fresh_names: usize,
    /// Interactions: the equation was matched against the rule with sides
    /// swapped. Indirections: the substituted name was the right-hand side.
    pub flipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStatus {
    Normal,
    FuelExhausted,
    StuckDeadlock,
    StuckNorule,
}

impl NormalizeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormalizeStatus::Normal => "normal",
            NormalizeStatus::FuelExhausted => "fuel-exhausted",
            NormalizeStatus::StuckDeadlock => "stuck-deadlock",
            NormalizeStatus::StuckNorule => "stuck-norule",
        }
    }
}

impl std::fmt::Display for NormalizeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Summary of a reduction run. `max_width` is the largest number of
/// simultaneously available interaction redexes observed after each eager
/// indirection phase, a measure of the available parallelism.
#[derive(Debug, Clone)]
pub struct NormalizeResult {
    pub config: Configuration,
    pub status: NormalizeStatus,
    pub interactions: u64,
    pub indirections: u64,
    pub max_width: usize,
    pub trace: Option<Vec<(Configuration, StepInfo)>>,
}

#[derive(Debug, Clone)]
pub enum StepOutcome {
    Stepped(Configuration, StepInfo),
    Normal,
    Stuck(RedexReport),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("equation index {0} is out of bounds")]
    OutOfBounds(usize),
    #[error("equation {0} is not an interaction redex")]
    NotAnInteraction(usize),
    #[error("no rule for the active pair at equation {0}")]
    NoRuleForPair(usize),
    #[error("equation {0} is not an applicable indirection")]
    NotAnIndirection(usize),
}

#[derive(Debug, Clone)]
pub enum CycleOutcome {
    /// A canonical state was revisited after `period` further interactions.
    Cycle {
        period: u64,
        interactions: u64,
        state: Configuration,
    },
    NoCycle {
        status: NormalizeStatus,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("cycle search exceeded the cap of {states} distinct states")]
    StateCapExceeded { states: usize },
    #[error(transparent)]
    Canon(#[from] CanonError),
}

enum EqClass {
    Interaction { key: RuleKey, flipped: bool },
    NoRule,
    Indirection { side: Side, target: usize },
    Deadlock,
    Answer,
}

fn other_occurrence(config: &Configuration, name: NameId, skip: usize) -> Option<usize> {
    config
        .equations
        .iter()
        .enumerate()
        .find(|(j, eq)| *j != skip && (eq.lhs.contains_name(name) || eq.rhs.contains_name(name)))
        .map(|(j, _)| j)
}

/// Classification of an equation with at least one name side.
fn classify_name_equation(config: &Configuration, index: usize) -> EqClass {
    let eq = &config.equations[index];
    if let Term::Name(x) = eq.lhs {
        if eq.rhs.contains_name(x) {
            return EqClass::Deadlock;
        }
    }
    if let Term::Name(y) = eq.rhs {
        if eq.lhs.contains_name(y) {
            return EqClass::Deadlock;
        }
    }
    for (side, term) in [(Side::Lhs, &eq.lhs), (Side::Rhs, &eq.rhs)] {
        if let Term::Name(x) = term {
            if !config.is_interface(*x) {
                if let Some(target) = other_occurrence(config, *x, index) {
                    return EqClass::Indirection { side, target };
                }
            }
        }
    }
    EqClass::Answer
}

fn classify_equation(config: &Configuration, index: usize, system: &InteractionSystem) -> EqClass {
    let eq = &config.equations[index];
    match (&eq.lhs, &eq.rhs) {
        (Term::Agent(a, _), Term::Agent(b, _)) => match system.rule(*a, *b) {
            Some(rule) => EqClass::Interaction {
                key: RuleKey::new(*a, *b),
                flipped: rule.alpha != *a,
            },
            None => EqClass::NoRule,
        },
        _ => classify_name_equation(config, index),
    }
}

/// Classifies every equation of `config`: active pairs with and without a
/// rule, applicable indirections, deadlocks, and answers (equations that
/// only touch interface names).
pub fn find_redexes(config: &Configuration, system: &InteractionSystem) -> RedexReport {
    let mut report = RedexReport::default();
    for index in 0..config.equations.len() {
        match classify_equation(config, index, system) {
            EqClass::Interaction { key, flipped } => report.interactions.push(InteractionRedex {
                index,
                key,
                flipped,
            }),
            EqClass::NoRule => report.norule.push(index),
            EqClass::Indirection { side, target } => report.indirections.push(IndirectionRedex {
                index,
                name_side: side,
                target,
            }),
            EqClass::Deadlock => report.deadlocks.push(index),
            EqClass::Answer => report.answers.push(index),
        }
    }
    report
}

fn instantiate(term: &Term, rename: &mut HashMap<NameId, NameId>, pool: &mut NamePool) -> Term {
    match term {
        Term::Agent(id, args) => Term::Agent(
            *id,
            args.iter().map(|t| instantiate(t, rename, pool)).collect(),
        ),
        Term::Name(n) => Term::Name(*rename.entry(*n).or_insert_with(|| pool.fresh())),
    }
}

/// In-place interaction at `index`. The equation is replaced by the
/// `ar(alpha) + ar(beta)` equations pairing its argument terms with the
/// freshly renamed rule sides; no other equation is touched.
fn interaction_step(
    config: &mut Configuration,
    index: usize,
    system: &InteractionSystem,
) -> Result<StepInfo, StepError> {
    if index >= config.equations.len() {
        return Err(StepError::OutOfBounds(index));
    }
    let (key, flipped) = match classify_equation(config, index, system) {
        EqClass::Interaction { key, flipped } => (key, flipped),
        EqClass::NoRule => return Err(StepError::NoRuleForPair(index)),
        _ => return Err(StepError::NotAnInteraction(index)),
    };

    let equation = config.equations[index].clone();
    let (Term::Agent(_, lhs_args), Term::Agent(_, rhs_args)) = (equation.lhs, equation.rhs) else {
        unreachable!("interaction redexes have agents on both sides");
    };
    let (alpha_args, beta_args) = if flipped {
        (rhs_args, lhs_args)
    } else {
        (lhs_args, rhs_args)
    };

    let rule = system
        .rule(key.first(), key.second())
        .expect("classification found the rule");
    let mut rename = HashMap::new();
    let alpha_side: Vec<Term> = rule
        .alpha_side
        .iter()
        .map(|t| instantiate(t, &mut rename, &mut config.names))
        .collect();
    let beta_side: Vec<Term> = rule
        .beta_side
        .iter()
        .map(|t| instantiate(t, &mut rename, &mut config.names))
        .collect();
    let fresh_names = rename.len();

    let replacement: Vec<Equation> = alpha_args
        .into_iter()
        .zip(alpha_side)
        .chain(beta_args.into_iter().zip(beta_side))
        .map(|(arg, side)| Equation::new(arg, side))
        .collect();
    config.equations.splice(index..=index, replacement);

    Ok(StepInfo {
        kind: StepKind::Interaction,
        rule: Some(key),
        equation: index,
        fresh_names,
        flipped,
    })
}

/// In-place indirection at `index`: removes the equation and substitutes its
/// term into the other occurrence of its internal name.
fn indirection_step(config: &mut Configuration, index: usize) -> Result<StepInfo, StepError> {
    if index >= config.equations.len() {
        return Err(StepError::OutOfBounds(index));
    }
    if matches!(
        (&config.equations[index].lhs, &config.equations[index].rhs),
        (Term::Agent(..), Term::Agent(..))
    ) {
        return Err(StepError::NotAnIndirection(index));
    }
    let side = match classify_name_equation(config, index) {
        EqClass::Indirection { side, .. } => side,
        _ => return Err(StepError::NotAnIndirection(index)),
    };

    let equation = config.equations.remove(index);
    let (name, payload) = match side {
        Side::Lhs => {
            let Term::Name(x) = equation.lhs else {
                unreachable!()
            };
            (x, equation.rhs)
        }
        Side::Rhs => {
            let Term::Name(x) = equation.rhs else {
                unreachable!()
            };
            (x, equation.lhs)
        }
    };
    let substituted = config.equations.iter_mut().any(|eq| {
        eq.lhs.replace_first(name, &payload) || eq.rhs.replace_first(name, &payload)
    });
    debug_assert!(substituted, "classified indirection has another occurrence");

    Ok(StepInfo {
        kind: StepKind::Indirection,
        rule: None,
        equation: index,
        fresh_names: 0,
        flipped: side == Side::Rhs,
    })
}

fn lowest_indirection(config: &Configuration) -> Option<usize> {
    (0..config.equations.len()).find(|&i| {
        !matches!(
            (&config.equations[i].lhs, &config.equations[i].rhs),
            (Term::Agent(..), Term::Agent(..))
        ) && matches!(
            classify_name_equation(config, i),
            EqClass::Indirection { .. }
        )
    })
}

fn resolve_in_place(config: &mut Configuration, mut on_step: impl FnMut(&Configuration, StepInfo)) -> u64 {
    let mut count = 0;
    while let Some(index) = lowest_indirection(config) {
        let info = indirection_step(config, index).expect("classified indirection applies");
        count += 1;
        on_step(config, info);
    }
    count
}

/// Pure interaction: returns the stepped configuration and the step record.
pub fn apply_interaction(
    config: &Configuration,
    index: usize,
    system: &InteractionSystem,
) -> Result<(Configuration, StepInfo), StepError> {
    let mut next = config.clone();
    let info = interaction_step(&mut next, index, system)?;
    Ok((next, info))
}

/// Pure indirection: removes equation `index` (of the form `x = u`) and
/// substitutes `u` for the other occurrence of `x`.
pub fn apply_indirection(
    config: &Configuration,
    index: usize,
) -> Result<(Configuration, StepInfo), StepError> {
    let mut next = config.clone();
    let info = indirection_step(&mut next, index)?;
    Ok((next, info))
}

/// Applies indirections at the lowest applicable index until none applies.
/// Deadlocked and answer equations stay in place. Returns the resolved
/// configuration and the number of indirections applied.
pub fn resolve_indirections(config: &Configuration) -> (Configuration, u64) {
    let mut next = config.clone();
    let count = resolve_in_place(&mut next, |_, _| {});
    (next, count)
}

fn pick_interaction(
    redexes: &[InteractionRedex],
    strategy: Strategy,
    serials: &[u64],
    rng: Option<&mut ChaCha8Rng>,
) -> usize {
    match strategy {
        Strategy::ByIndex => redexes[0].index,
        Strategy::Fifo => {
            redexes
                .iter()
                .min_by_key(|r| serials[r.index])
                .expect("nonempty")
                .index
        }
        Strategy::Lifo => {
            redexes
                .iter()
                .max_by_key(|r| serials[r.index])
                .expect("nonempty")
                .index
        }
        Strategy::Random(_) => {
            let rng = rng.expect("random strategy carries an rng");
            redexes[rng.random_range(0..redexes.len())].index
        }
    }
}

fn terminal_status(report: &RedexReport) -> NormalizeStatus {
    if !report.norule.is_empty() {
        NormalizeStatus::StuckNorule
    } else if !report.deadlocks.is_empty() {
        NormalizeStatus::StuckDeadlock
    } else {
        NormalizeStatus::Normal
    }
}

/// One engine step: resolves any pending indirections, picks one interaction
/// redex per `strategy`, applies it, and resolves indirections eagerly.
/// Returns `Normal` when nothing remains but answers, `Stuck` when only
/// deadlock or rule-less equations remain.
pub fn step(
    config: &Configuration,
    system: &InteractionSystem,
    strategy: Strategy,
) -> StepOutcome {
    let (mut current, _) = resolve_indirections(config);
    let report = find_redexes(&current, system);
    if report.interactions.is_empty() {
        return if report.norule.is_empty() && report.deadlocks.is_empty() {
            StepOutcome::Normal
        } else {
            StepOutcome::Stuck(report)
        };
    }
    let serials: Vec<u64> = (0..current.equations.len() as u64).collect();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let index = pick_interaction(&report.interactions, strategy, &serials, rng.as_mut());
    let info = interaction_step(&mut current, index, system).expect("picked redex applies");
    resolve_in_place(&mut current, |_, _| {});
    StepOutcome::Stepped(current, info)
}

/// Reduces until normal form, a stuck state, or `fuel` interactions.
/// Interactions and indirections are counted separately; the trace, when
/// requested, records the configuration after every single step.
pub fn normalize(
    config: &Configuration,
    system: &InteractionSystem,
    strategy: Strategy,
    fuel: u64,
    want_trace: bool,
) -> NormalizeResult {
    let mut current = config.clone();
    let mut serials: Vec<u64> = (0..current.equations.len() as u64).collect();
    let mut next_serial = serials.len() as u64;
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut trace: Option<Vec<(Configuration, StepInfo)>> = want_trace.then(Vec::new);
    let mut interactions = 0u64;
    let mut indirections = 0u64;
    let mut max_width = 0usize;

    let status = loop {
        while let Some(index) = lowest_indirection(&current) {
            let info = indirection_step(&mut current, index).expect("indirection applies");
            serials.remove(info.equation);
            indirections += 1;
            if let Some(tr) = trace.as_mut() {
                tr.push((current.clone(), info));
            }
        }

        let report = find_redexes(&current, system);
        max_width = max_width.max(report.interactions.len());
        if report.interactions.is_empty() {
            break terminal_status(&report);
        }
        if interactions >= fuel {
            break NormalizeStatus::FuelExhausted;
        }

        let index = pick_interaction(&report.interactions, strategy, &serials, rng.as_mut());
        let info = interaction_step(&mut current, index, system).expect("picked redex applies");
        let key = info.rule.expect("interactions carry a rule key");
        let children =
            system.signature.arity(key.first()) + system.signature.arity(key.second());
        serials.splice(index..=index, (0..children as u64).map(|k| next_serial + k));
        next_serial += children as u64;
        interactions += 1;
        if let Some(tr) = trace.as_mut() {
            tr.push((current.clone(), info));
        }
    };

    NormalizeResult {
        config: current,
        status,
        interactions,
        indirections,
        max_width,
        trace,
    }
}

/// Reduces with `strategy`, canonicalizing after each eager-indirection
/// phase, and reports the first revisited canonical state together with the
/// number of interactions between the two visits. Because reduction
/// continues from canonical states, `Fifo` coincides with `ByIndex` here.
pub fn detect_cycle(
    config: &Configuration,
    system: &InteractionSystem,
    strategy: Strategy,
    max_states: usize,
    canon_cap: usize,
) -> Result<CycleOutcome, CycleError> {
    let (resolved, _) = resolve_indirections(config);
    let (mut state, key) = canonical_form(&resolved, canon_cap)?;
    let mut seen: HashMap<CanonicalKey, u64> = HashMap::new();
    seen.insert(key, 0);
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut interactions = 0u64;

    loop {
        let report = find_redexes(&state, system);
        if report.interactions.is_empty() {
            return Ok(CycleOutcome::NoCycle {
                status: terminal_status(&report),
            });
        }
        let serials: Vec<u64> = (0..state.equations.len() as u64).collect();
        let index = pick_interaction(&report.interactions, strategy, &serials, rng.as_mut());
        interaction_step(&mut state, index, system).expect("picked redex applies");
        resolve_in_place(&mut state, |_, _| {});
        interactions += 1;

        let (canon, key) = canonical_form(&state, canon_cap)?;
        state = canon;
        if let Some(&previous) = seen.get(&key) {
            return Ok(CycleOutcome::Cycle {
                period: interactions - previous,
                interactions,
                state,
            });
        }
        if seen.len() >= max_states {
            return Err(CycleError::StateCapExceeded { states: seen.len() });
        }
        seen.insert(key, interactions);
    }
}

/// The line-oriented trace format: `STEP k INTERACTION {a,b} eq=i` or
/// `STEP k INDIRECTION eq=i`.
pub fn trace_line(step_number: u64, info: &StepInfo, sig: &Signature) -> String {
    match info.kind {
        StepKind::Interaction => format!(
            "STEP {step_number} INTERACTION {} eq={}",
            info.rule.expect("interaction has a key").display(sig),
            info.equation
        ),
        StepKind::Indirection => format!("STEP {step_number} INDIRECTION eq={}", info.equation),
    }
}
