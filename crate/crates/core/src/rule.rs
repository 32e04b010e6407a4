//! Interaction rules and interaction systems.
//!
//! A rule `alpha[v1,...,vm] >< beta[w1,...,wn]` rewrites an active pair of
//! agents `alpha`/`beta`. Rule lookup is by unordered agent pair, with at
//! most one rule per pair so that reduction is deterministic. Rules for a
//! pair of equal agents must be invariant under swapping their two sides
//! (up to renaming), otherwise the orientation of the equation being
//! rewritten would be observable and strong confluence would fail.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::ast::{AgentId, NameId, NamePool, Signature, Term};

/// Unordered agent pair used as the rule-table key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleKey(AgentId, AgentId);

impl RuleKey {
    pub fn new(a: AgentId, b: AgentId) -> Self {
        if a <= b {
            RuleKey(a, b)
        } else {
            RuleKey(b, a)
        }
    }

    pub fn first(&self) -> AgentId {
        self.0
    }

    pub fn second(&self) -> AgentId {
        self.1
    }

    /// `{alpha,beta}` with agent names ordered alphabetically.
    pub fn display(&self, sig: &Signature) -> String {
        let mut names = [sig.agent(self.0).name.as_str(), sig.agent(self.1).name.as_str()];
        names.sort_unstable();
        format!("{{{},{}}}", names[0], names[1])
    }
}

/// One interaction rule. `alpha_side` has length `ar(alpha)` and `beta_side`
/// length `ar(beta)`; every name occurs exactly twice across the two sides
/// combined. Names are scoped to the rule's own pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub alpha: AgentId,
    pub alpha_side: Vec<Term>,
    pub beta: AgentId,
    pub beta_side: Vec<Term>,
    pub names: NamePool,
}

impl Rule {
    pub fn key(&self) -> RuleKey {
        RuleKey::new(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("rule {rule}: agent `{agent}` used with {found} argument(s), arity is {expected}")]
    RuleArity {
        rule: String,
        agent: String,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule}: name `{name}` occurs {count} time(s), expected exactly 2")]
    NonLinearName {
        rule: String,
        name: String,
        count: usize,
    },
    #[error("rule {rule}: self-pair rule is not symmetric under side swap")]
    AsymmetricSelfRule { rule: String },
    #[error("duplicate rule for pair {pair}")]
    DuplicateRulePair { pair: String },
    #[error("rule {rule}: agent id {id} is not in the signature")]
    UnknownAgent { rule: String, id: AgentId },
}

/// Token of the deterministic rule-side encoding used for the symmetry check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymToken {
    Agent(AgentId),
    Name(u32),
}

fn encode_sequence(terms: &[&Term]) -> Vec<SymToken> {
    fn walk(term: &Term, numbering: &mut HashMap<NameId, u32>, out: &mut Vec<SymToken>) {
        match term {
            Term::Name(n) => {
                let next = numbering.len() as u32;
                let num = *numbering.entry(*n).or_insert(next);
                out.push(SymToken::Name(num));
            }
            Term::Agent(id, args) => {
                out.push(SymToken::Agent(*id));
                args.iter().for_each(|t| walk(t, &mut *numbering, out));
            }
        }
    }
    let mut numbering = HashMap::new();
    let mut out = Vec::new();
    for t in terms {
        walk(t, &mut numbering, &mut out);
    }
    out
}

/// True iff swapping the rule's sides yields an α-equivalent rule. Rule sides
/// are ordered sequences, so α-equivalence here is plain renaming: the
/// first-use encodings of `alpha_side ++ beta_side` and
/// `beta_side ++ alpha_side` must coincide.
pub fn self_rule_symmetric(rule: &Rule) -> bool {
    let forward: Vec<&Term> = rule.alpha_side.iter().chain(&rule.beta_side).collect();
    let swapped: Vec<&Term> = rule.beta_side.iter().chain(&rule.alpha_side).collect();
    encode_sequence(&forward) == encode_sequence(&swapped)
}

/// True when the two rules rewrite the same agent pair identically: sides
/// equal up to renaming of rule-internal names, allowing for the stored
/// orientation to differ. Both rules must come from signatures with the same
/// agent-id layout.
pub fn same_rule_up_to_renaming(a: &Rule, b: &Rule) -> bool {
    let enc = |first: &[Term], second: &[Term]| {
        let seq: Vec<&Term> = first.iter().chain(second).collect();
        encode_sequence(&seq)
    };
    if a.alpha == b.alpha && a.beta == b.beta {
        let direct = enc(&a.alpha_side, &a.beta_side) == enc(&b.alpha_side, &b.beta_side);
        if direct {
            return true;
        }
    }
    a.alpha == b.beta
        && a.beta == b.alpha
        && enc(&a.alpha_side, &a.beta_side) == enc(&b.beta_side, &b.alpha_side)
}

fn check_side_arities(rule_name: &str, terms: &[Term], sig: &Signature, out: &mut Vec<SystemError>) {
    fn walk(rule_name: &str, term: &Term, sig: &Signature, out: &mut Vec<SystemError>) {
        if let Term::Agent(id, args) = term {
            match sig.get(*id) {
                None => out.push(SystemError::UnknownAgent {
                    rule: rule_name.to_string(),
                    id: *id,
                }),
                Some(agent) => {
                    if agent.arity != args.len() {
                        out.push(SystemError::RuleArity {
                            rule: rule_name.to_string(),
                            agent: agent.name.clone(),
                            expected: agent.arity,
                            found: args.len(),
                        });
                    }
                }
            }
            args.iter().for_each(|t| walk(rule_name, t, sig, out));
        }
    }
    terms.iter().for_each(|t| walk(rule_name, t, sig, out));
}

/// Validates a single rule against a signature, reporting every violation.
pub fn validate_rule(rule: &Rule, sig: &Signature) -> Vec<SystemError> {
    let mut out = Vec::new();
    let rule_name = rule_label(rule, sig);

    for (agent, side) in [(rule.alpha, &rule.alpha_side), (rule.beta, &rule.beta_side)] {
        match sig.get(agent) {
            None => out.push(SystemError::UnknownAgent {
                rule: rule_name.clone(),
                id: agent,
            }),
            Some(ty) => {
                if ty.arity != side.len() {
                    out.push(SystemError::RuleArity {
                        rule: rule_name.clone(),
                        agent: ty.name.clone(),
                        expected: ty.arity,
                        found: side.len(),
                    });
                }
            }
        }
        check_side_arities(&rule_name, side, sig, &mut out);
    }

    let mut counts: BTreeMap<NameId, usize> = BTreeMap::new();
    let mut occurrences = Vec::new();
    for t in rule.alpha_side.iter().chain(&rule.beta_side) {
        t.collect_names(&mut occurrences);
    }
    for n in occurrences {
        *counts.entry(n).or_insert(0) += 1;
    }
    for (name, count) in counts {
        if count != 2 {
            out.push(SystemError::NonLinearName {
                rule: rule_name.clone(),
                name: rule.names.surface(name).to_string(),
                count,
            });
        }
    }

    if rule.alpha == rule.beta && out.is_empty() && !self_rule_symmetric(rule) {
        out.push(SystemError::AsymmetricSelfRule { rule: rule_name });
    }
    out
}

fn rule_label(rule: &Rule, sig: &Signature) -> String {
    let alpha = sig.get(rule.alpha).map_or("?", |a| a.name.as_str());
    let beta = sig.get(rule.beta).map_or("?", |a| a.name.as_str());
    format!("{alpha}[..] >< {beta}[..]")
}

/// A signature together with a rule table keyed by unordered agent pairs.
#[derive(Debug, Clone)]
pub struct InteractionSystem {
    pub signature: Signature,
    rules: BTreeMap<RuleKey, Rule>,
}

impl InteractionSystem {
    /// Builds a system, validating every rule and the one-rule-per-pair
    /// restriction. All violations are reported at once.
    pub fn build(signature: Signature, rules: Vec<Rule>) -> Result<Self, Vec<SystemError>> {
        let mut errors = Vec::new();
        let mut table = BTreeMap::new();
        for rule in rules {
            errors.extend(validate_rule(&rule, &signature));
            let key = rule.key();
            if table.insert(key, rule).is_some() {
                errors.push(SystemError::DuplicateRulePair {
                    pair: key.display(&signature),
                });
            }
        }
        if errors.is_empty() {
            Ok(InteractionSystem {
                signature,
                rules: table,
            })
        } else {
            Err(errors)
        }
    }

    /// Looks the rule table up by unordered pair.
    pub fn rule(&self, a: AgentId, b: AgentId) -> Option<&Rule> {
        self.rules.get(&RuleKey::new(a, b))
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Rules in deterministic key order.
    pub fn rules(&self) -> impl Iterator<Item = (RuleKey, &Rule)> {
        self.rules.iter().map(|(k, r)| (*k, r))
    }
}
