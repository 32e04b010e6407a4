//! Domain types for the interaction calculus: signatures, terms, equations,
//! and configurations, plus validation and occurrence counting.
//!
//! A configuration is a multiset of equations between terms. Names stand for
//! wire ends and must occur exactly twice overall; the optional interface
//! list contributes one occurrence per listed name, so an interface name
//! appears exactly once inside the equations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of an agent type inside a [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

/// Opaque name identifier, scoped to the [`NamePool`] of its container
/// (a configuration or a rule). Surface strings live in the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An agent symbol together with its arity (number of auxiliary ports).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentType {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("agent `{0}` is declared twice")]
    DuplicateAgent(String),
}

/// A finite set of agent types with lookup by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    agents: Vec<AgentType>,
    by_name: HashMap<String, AgentId>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an agent; names must be unique within the signature.
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<AgentId, SignatureError> {
        if self.by_name.contains_key(name) {
            return Err(SignatureError::DuplicateAgent(name.to_string()));
        }
        let id = AgentId(self.agents.len() as u32);
        self.agents.push(AgentType {
            name: name.to_string(),
            arity,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<AgentId> {
        self.by_name.get(name).copied()
    }

    pub fn get(&self, id: AgentId) -> Option<&AgentType> {
        self.agents.get(id.0 as usize)
    }

    /// Panics if `id` does not belong to this signature.
    pub fn agent(&self, id: AgentId) -> &AgentType {
        &self.agents[id.0 as usize]
    }

    pub fn arity(&self, id: AgentId) -> usize {
        self.agent(id).arity
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AgentId, &AgentType)> {
        self.agents
            .iter()
            .enumerate()
            .map(|(i, a)| (AgentId(i as u32), a))
    }
}

/// Maps opaque name ids to surface strings. Fresh names come from a monotone
/// counter and never collide with already interned surfaces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamePool {
    surfaces: Vec<String>,
    index: HashMap<String, NameId>,
    fresh_counter: u32,
}

impl NamePool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `surface`, interning it on first sight.
    pub fn intern(&mut self, surface: &str) -> NameId {
        if let Some(&id) = self.index.get(surface) {
            return id;
        }
        let id = NameId(self.surfaces.len() as u32);
        self.surfaces.push(surface.to_string());
        self.index.insert(surface.to_string(), id);
        id
    }

    /// Mints a new name whose surface is unused in this pool.
    pub fn fresh(&mut self) -> NameId {
        loop {
            let candidate = format!("x{}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.index.contains_key(&candidate) {
                return self.intern(&candidate);
            }
        }
    }

    pub fn surface(&self, id: NameId) -> &str {
        &self.surfaces[id.0 as usize]
    }

    pub fn lookup(&self, surface: &str) -> Option<NameId> {
        self.index.get(surface).copied()
    }

    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }
}

/// A term is either an agent applied to exactly `arity` arguments or a name.
/// The agent head position is the principal port; argument order is the
/// auxiliary-port order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Agent(AgentId, Vec<Term>),
    Name(NameId),
}

impl Term {
    pub fn agent(id: AgentId, args: Vec<Term>) -> Self {
        Term::Agent(id, args)
    }

    pub fn name(id: NameId) -> Self {
        Term::Name(id)
    }

    pub fn is_name(&self) -> bool {
        matches!(self, Term::Name(_))
    }

    /// Number of agent occurrences in this term.
    pub fn agent_count(&self) -> usize {
        match self {
            Term::Name(_) => 0,
            Term::Agent(_, args) => 1 + args.iter().map(Term::agent_count).sum::<usize>(),
        }
    }

    pub fn contains_name(&self, name: NameId) -> bool {
        match self {
            Term::Name(n) => *n == name,
            Term::Agent(_, args) => args.iter().any(|t| t.contains_name(name)),
        }
    }

    /// Appends every name occurrence, left to right.
    pub fn collect_names(&self, out: &mut Vec<NameId>) {
        match self {
            Term::Name(n) => out.push(*n),
            Term::Agent(_, args) => args.iter().for_each(|t| t.collect_names(out)),
        }
    }

    /// Replaces the first occurrence of `name` with `replacement`.
    /// Returns true if a replacement happened.
    pub fn replace_first(&mut self, name: NameId, replacement: &Term) -> bool {
        match self {
            Term::Name(n) if *n == name => {
                *self = replacement.clone();
                true
            }
            Term::Name(_) => false,
            Term::Agent(_, args) => {
                for arg in args {
                    if arg.replace_first(name, replacement) {
                        return true;
                    }
                }
                false
            }
        }
    }
}

/// One equation of a configuration. Stored as an ordered pair, but every
/// semantic operation inspects both orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn agent_count(&self) -> usize {
        self.lhs.agent_count() + self.rhs.agent_count()
    }
}

/// A multiset of equations plus an optional ordered interface of free names.
///
/// Structural equality (`==`) compares representations, not α-classes; use
/// [`crate::canon::alpha_equivalent`] for the semantic notion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Configuration {
    pub equations: Vec<Equation>,
    pub interface: Vec<NameId>,
    pub names: NamePool,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn agent_count(&self) -> usize {
        self.equations.iter().map(Equation::agent_count).sum()
    }

    pub fn is_interface(&self, name: NameId) -> bool {
        self.interface.contains(&name)
    }

    /// Surface strings of the interface, in order.
    pub fn interface_surfaces(&self) -> Vec<String> {
        self.interface
            .iter()
            .map(|&n| self.names.surface(n).to_string())
            .collect()
    }
}

/// A single invariant violation found by [`validate_configuration`].
/// Violations are data, not failures: an invalid configuration is reported,
/// never panicked on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An agent is applied to the wrong number of arguments.
    ArityMismatch {
        agent: String,
        expected: usize,
        found: usize,
    },
    /// A term references an agent id outside the signature.
    UnknownAgent { id: AgentId },
    /// Total occurrence count (equations plus interface slots) differs from 2.
    NameCount { name: String, count: usize },
    /// An interface name is listed more than once.
    DuplicateInterface { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArityMismatch {
                agent,
                expected,
                found,
            } => write!(
                f,
                "agent `{agent}` applied to {found} argument(s), arity is {expected}"
            ),
            Violation::UnknownAgent { id } => write!(f, "agent id {id} is not in the signature"),
            Violation::NameCount { name, count } => {
                write!(f, "name `{name}` occurs {count} time(s), expected exactly 2")
            }
            Violation::DuplicateInterface { name } => {
                write!(f, "interface name `{name}` is listed more than once")
            }
        }
    }
}

fn check_term_arities(term: &Term, sig: &Signature, out: &mut Vec<Violation>) {
    match term {
        Term::Name(_) => {}
        Term::Agent(id, args) => {
            match sig.get(*id) {
                None => out.push(Violation::UnknownAgent { id: *id }),
                Some(agent) => {
                    if agent.arity != args.len() {
                        out.push(Violation::ArityMismatch {
                            agent: agent.name.clone(),
                            expected: agent.arity,
                            found: args.len(),
                        });
                    }
                }
            }
            for arg in args {
                check_term_arities(arg, sig, out);
            }
        }
    }
}

/// Exact multiset of name occurrences, counting interface slots.
pub fn name_occurrences(config: &Configuration) -> BTreeMap<NameId, usize> {
    let mut counts = BTreeMap::new();
    let mut buf = Vec::new();
    for eq in &config.equations {
        eq.lhs.collect_names(&mut buf);
        eq.rhs.collect_names(&mut buf);
    }
    for name in buf {
        *counts.entry(name).or_insert(0) += 1;
    }
    for &name in &config.interface {
        *counts.entry(name).or_insert(0) += 1;
    }
    counts
}

/// Checks every configuration invariant against `sig` and reports all
/// violations; an empty report means the configuration is valid.
pub fn validate_configuration(config: &Configuration, sig: &Signature) -> Vec<Violation> {
    let mut out = Vec::new();
    for eq in &config.equations {
        check_term_arities(&eq.lhs, sig, &mut out);
        check_term_arities(&eq.rhs, sig, &mut out);
    }

    let mut seen = BTreeMap::new();
    for &name in &config.interface {
        let slot = seen.entry(name).or_insert(0usize);
        *slot += 1;
        if *slot == 2 {
            out.push(Violation::DuplicateInterface {
                name: config.names.surface(name).to_string(),
            });
        }
    }

    for (name, count) in name_occurrences(config) {
        if count != 2 {
            out.push(Violation::NameCount {
                name: config.names.surface(name).to_string(),
                count,
            });
        }
    }
    out
}
