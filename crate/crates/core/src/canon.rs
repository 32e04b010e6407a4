//! Exact canonicalization of configurations up to α-conversion.
//!
//! Two configurations are α-equivalent when some renaming of internal names
//! (interface names fixed pointwise), some reordering of the equation
//! multiset, and per-equation orientation flips map one onto the other.
//! Deciding this is graph-isomorphism-complete for port graphs, so the
//! canonicalizer is an exact backtracking search with lexicographic pruning,
//! guarded by a hard agent-count cap.
//!
//! The search works per connected component (equations linked by shared
//! internal names): each component is encoded as the lexicographically least
//! token stream over all equation orders, orientations, and first-use name
//! numberings, then components are sorted by their streams. The result is a
//! deterministic representative: α-equivalent inputs canonicalize to
//! identical configurations, and canonicalization is idempotent.

use std::collections::HashMap;

use thiserror::Error;

use crate::ast::{Configuration, Equation, NameId, NamePool, Term};

/// Default hard cap on agent occurrences accepted by the canonicalizer.
pub const DEFAULT_AGENT_CAP: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("configuration has {agents} agent occurrences, canonicalization cap is {cap}")]
    TooLarge { agents: usize, cap: usize },
}

/// One token of the canonical encoding. The derived order (equation
/// separator < agent < internal name < interface slot) fixes which
/// representative wins; any total order would do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Eq,
    Agent(u32),
    Name(u32),
    Iface(u32),
}

/// Hashable identity of an α-equivalence class. Keys are only comparable
/// between configurations over the same signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub interface: Vec<String>,
    pub tokens: Vec<Token>,
}

/// Canonical configuration plus its key.
pub fn canonical_form(
    config: &Configuration,
    cap: usize,
) -> Result<(Configuration, CanonicalKey), CanonError> {
    let agents = config.agent_count();
    if agents > cap {
        return Err(CanonError::TooLarge { agents, cap });
    }

    let iface_pos: HashMap<NameId, u32> = config
        .interface
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, i as u32))
        .collect();

    let components = split_components(config, &iface_pos);
    let mut minimized: Vec<(Vec<Token>, Vec<(usize, bool)>)> = components
        .iter()
        .map(|eqs| Search::new(config, &iface_pos, eqs).minimize())
        .collect();
    minimized.sort();

    Ok(rebuild(config, &iface_pos, &minimized))
}

/// Deterministic α-class representative: internal names renumbered in
/// first-use order, equations in canonical order, interface untouched.
pub fn canonicalize_with_cap(
    config: &Configuration,
    cap: usize,
) -> Result<Configuration, CanonError> {
    canonical_form(config, cap).map(|(c, _)| c)
}

pub fn canonicalize(config: &Configuration) -> Result<Configuration, CanonError> {
    canonicalize_with_cap(config, DEFAULT_AGENT_CAP)
}

pub fn canonical_key_with_cap(
    config: &Configuration,
    cap: usize,
) -> Result<CanonicalKey, CanonError> {
    canonical_form(config, cap).map(|(_, k)| k)
}

pub fn canonical_key(config: &Configuration) -> Result<CanonicalKey, CanonError> {
    canonical_key_with_cap(config, DEFAULT_AGENT_CAP)
}

/// True iff the two configurations are α-equivalent (equal canonical keys).
pub fn alpha_equivalent_with_cap(
    a: &Configuration,
    b: &Configuration,
    cap: usize,
) -> Result<bool, CanonError> {
    Ok(canonical_key_with_cap(a, cap)? == canonical_key_with_cap(b, cap)?)
}

pub fn alpha_equivalent(a: &Configuration, b: &Configuration) -> Result<bool, CanonError> {
    alpha_equivalent_with_cap(a, b, DEFAULT_AGENT_CAP)
}

/// Groups equation indices into connected components; two equations are
/// linked when they share an internal name. Interface names occur once in
/// the equations and link nothing.
fn split_components(config: &Configuration, iface_pos: &HashMap<NameId, u32>) -> Vec<Vec<usize>> {
    let n = config.equations.len();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }

    let mut first_seen: HashMap<NameId, usize> = HashMap::new();
    let mut buf = Vec::new();
    for (idx, eq) in config.equations.iter().enumerate() {
        buf.clear();
        eq.lhs.collect_names(&mut buf);
        eq.rhs.collect_names(&mut buf);
        for &name in &buf {
            if iface_pos.contains_key(&name) {
                continue;
            }
            match first_seen.get(&name) {
                None => {
                    first_seen.insert(name, idx);
                }
                Some(&other) => {
                    let a = find(&mut parent, other);
                    let b = find(&mut parent, idx);
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    // Stable starting point for the search; final order comes from the
    // minimized token streams.
    components.sort();
    components
}

/// Backtracking minimizer for one component.
struct Search<'a> {
    config: &'a Configuration,
    iface_pos: &'a HashMap<NameId, u32>,
    eqs: &'a [usize],
    used: Vec<bool>,
    assignment: HashMap<NameId, u32>,
    next_num: u32,
    partial: Vec<Token>,
    order: Vec<(usize, bool)>,
    best: Option<(Vec<Token>, Vec<(usize, bool)>)>,
}

impl<'a> Search<'a> {
    fn new(
        config: &'a Configuration,
        iface_pos: &'a HashMap<NameId, u32>,
        eqs: &'a [usize],
    ) -> Self {
        Search {
            config,
            iface_pos,
            eqs,
            used: vec![false; eqs.len()],
            assignment: HashMap::new(),
            next_num: 0,
            partial: Vec::new(),
            order: Vec::new(),
            best: None,
        }
    }

    fn minimize(mut self) -> (Vec<Token>, Vec<(usize, bool)>) {
        self.step();
        self.best.expect("component search always yields a result")
    }

    /// Encodes equation `eq` in the given orientation against the current
    /// assignment without committing; returns the tokens and the names that
    /// would be newly numbered, in first-use order.
    fn encode_candidate(&self, eq: usize, flip: bool) -> (Vec<Token>, Vec<NameId>) {
        let mut tokens = vec![Token::Eq];
        let mut new_names: Vec<NameId> = Vec::new();
        let equation = &self.config.equations[eq];
        let (first, second) = if flip {
            (&equation.rhs, &equation.lhs)
        } else {
            (&equation.lhs, &equation.rhs)
        };
        self.encode_term(first, &mut tokens, &mut new_names);
        self.encode_term(second, &mut tokens, &mut new_names);
        (tokens, new_names)
    }

    fn encode_term(&self, term: &Term, tokens: &mut Vec<Token>, new_names: &mut Vec<NameId>) {
        match term {
            Term::Agent(id, args) => {
                tokens.push(Token::Agent(id.0));
                for arg in args {
                    self.encode_term(arg, tokens, new_names);
                }
            }
            Term::Name(n) => {
                if let Some(&pos) = self.iface_pos.get(n) {
                    tokens.push(Token::Iface(pos));
                } else if let Some(&num) = self.assignment.get(n) {
                    tokens.push(Token::Name(num));
                } else if let Some(pos) = new_names.iter().position(|m| m == n) {
                    tokens.push(Token::Name(self.next_num + pos as u32));
                } else {
                    tokens.push(Token::Name(self.next_num + new_names.len() as u32));
                    new_names.push(*n);
                }
            }
        }
    }

    /// True when extending the current prefix with `tokens` cannot beat or
    /// tie the best complete encoding found so far.
    fn prunable(&self, tokens: &[Token]) -> bool {
        let Some((best, _)) = &self.best else {
            return false;
        };
        let offset = self.partial.len();
        for (i, tok) in tokens.iter().enumerate() {
            match best.get(offset + i) {
                // All complete encodings of a component have equal length,
                // so running past the best means the prefix already tied.
                None => return false,
                Some(b) => match tok.cmp(b) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                },
            }
        }
        false
    }

    fn step(&mut self) {
        if self.order.len() == self.eqs.len() {
            let better = match &self.best {
                None => true,
                Some((best, _)) => self.partial < *best,
            };
            if better {
                self.best = Some((self.partial.clone(), self.order.clone()));
            }
            return;
        }

        let mut candidates: Vec<(Vec<Token>, Vec<NameId>, usize, bool)> = Vec::new();
        for (slot, &eq) in self.eqs.iter().enumerate() {
            if self.used[slot] {
                continue;
            }
            let (t0, n0) = self.encode_candidate(eq, false);
            let (t1, n1) = self.encode_candidate(eq, true);
            // A symmetric equation contributes one branch, not two.
            let same = t0 == t1 && n0 == n1;
            candidates.push((t0, n0, slot, false));
            if !same {
                candidates.push((t1, n1, slot, true));
            }
        }
        candidates.sort();

        for (tokens, new_names, slot, flip) in candidates {
            if self.prunable(&tokens) {
                continue;
            }
            let saved_len = self.partial.len();
            for &n in &new_names {
                self.assignment.insert(n, self.next_num);
                self.next_num += 1;
            }
            self.partial.extend_from_slice(&tokens);
            self.order.push((self.eqs[slot], flip));
            self.used[slot] = true;

            self.step();

            self.used[slot] = false;
            self.order.pop();
            self.partial.truncate(saved_len);
            for &n in &new_names {
                self.assignment.remove(&n);
                self.next_num -= 1;
            }
        }
    }
}

/// Assembles the canonical configuration and its key from the minimized
/// components: fresh pool, interface surfaces first, internal names
/// renumbered in first-use order across the concatenated components.
fn rebuild(
    config: &Configuration,
    iface_pos: &HashMap<NameId, u32>,
    components: &[(Vec<Token>, Vec<(usize, bool)>)],
) -> (Configuration, CanonicalKey) {
    let mut pool = NamePool::new();
    let interface: Vec<NameId> = config
        .interface
        .iter()
        .map(|&n| pool.intern(config.names.surface(n)))
        .collect();

    let mut rename: HashMap<NameId, NameId> = HashMap::new();
    let mut numbering: HashMap<NameId, u32> = HashMap::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut equations = Vec::new();

    for (_, order) in components {
        for &(eq_idx, flip) in order {
            let equation = &config.equations[eq_idx];
            let (first, second) = if flip {
                (&equation.rhs, &equation.lhs)
            } else {
                (&equation.lhs, &equation.rhs)
            };
            tokens.push(Token::Eq);
            let lhs = rebuild_term(
                first, config, iface_pos, &mut pool, &mut rename, &mut numbering, &mut tokens,
            );
            let rhs = rebuild_term(
                second, config, iface_pos, &mut pool, &mut rename, &mut numbering, &mut tokens,
            );
            equations.push(Equation::new(lhs, rhs));
        }
    }

    let key = CanonicalKey {
        interface: config.interface_surfaces(),
        tokens,
    };
    let canonical = Configuration {
        equations,
        interface,
        names: pool,
    };
    (canonical, key)
}

#[allow(clippy::too_many_arguments)]
fn rebuild_term(
    term: &Term,
    config: &Configuration,
    iface_pos: &HashMap<NameId, u32>,
    pool: &mut NamePool,
    rename: &mut HashMap<NameId, NameId>,
    numbering: &mut HashMap<NameId, u32>,
    tokens: &mut Vec<Token>,
) -> Term {
    match term {
        Term::Agent(id, args) => {
            tokens.push(Token::Agent(id.0));
            let new_args = args
                .iter()
                .map(|t| rebuild_term(t, config, iface_pos, pool, rename, numbering, tokens))
                .collect();
            Term::Agent(*id, new_args)
        }
        Term::Name(n) => {
            if let Some(&pos) = iface_pos.get(n) {
                tokens.push(Token::Iface(pos));
                Term::Name(pool.intern(config.names.surface(*n)))
            } else {
                let next = numbering.len() as u32;
                let num = *numbering.entry(*n).or_insert(next);
                tokens.push(Token::Name(num));
                let new_id = *rename.entry(*n).or_insert_with(|| pool.fresh());
                Term::Name(new_id)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::combinator_system;
    use crate::parser::parse_configuration;

    fn cfg(src: &str) -> Configuration {
        let sys = combinator_system();
        parse_configuration(src, &sys.signature).expect("test input parses")
    }

    #[test]
    fn renaming_does_not_change_canonical_form() {
        let a = canonicalize(&cfg("<del(eps,a) = gam(a,eps)>")).unwrap();
        let b = canonicalize(&cfg("<del(eps,q) = gam(q,eps)>")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equation_order_does_not_change_canonical_form() {
        let a = canonicalize(&cfg("<x1 = eps, x2 = eps> interface x1, x2;")).unwrap();
        let b = canonicalize(&cfg("<x2 = eps, x1 = eps> interface x1, x2;")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn orientation_flip_is_alpha_equivalence() {
        let a = cfg("<del(eps,x) = gam(x,eps)>");
        let b = cfg("<gam(y,eps) = del(eps,y)>");
        assert!(alpha_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn different_equation_counts_are_not_equivalent() {
        let a = cfg("<eps = eps>");
        let b = cfg("<>");
        assert!(!alpha_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn interface_names_are_fixed_pointwise() {
        let a = cfg("<r = gam(eps,eps)> interface r;");
        let b = cfg("<s = gam(eps,eps)> interface s;");
        let a2 = cfg("<r = gam(eps,eps)> interface r;");
        assert!(!alpha_equivalent(&a, &b).unwrap());
        assert!(alpha_equivalent(&a, &a2).unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for src in [
            "<del(eps,x) = gam(x,eps)>",
            "<x = gam(y,y), x = del(eps,z), z = w, w = eps>",
            "<r = gam(eps,eps)> interface r;",
            "<>",
            "<x = x>",
        ] {
            let c = cfg(src);
            let once = canonicalize(&c).unwrap();
            let twice = canonicalize(&once).unwrap();
            assert_eq!(once, twice, "not idempotent on {src}");
        }
    }

    #[test]
    fn shared_names_within_one_equation_stay_linked() {
        // x occurs twice in the same equation on both sides.
        let a = cfg("<gam(x,x) = gam(y,y)>");
        let b = cfg("<gam(p,p) = gam(q,q)>");
        let c = cfg("<gam(x,y) = gam(y,x)>");
        assert!(alpha_equivalent(&a, &b).unwrap());
        assert!(!alpha_equivalent(&a, &c).unwrap());
    }

    #[test]
    fn agent_cap_is_enforced() {
        // A complete gamma tree of depth 5 against an eps root has exactly
        // 64 agent occurrences; one more eps equation pushes it over.
        fn tree(depth: usize) -> String {
            if depth == 0 {
                "eps".to_string()
            } else {
                format!("gam({},{})", tree(depth - 1), tree(depth - 1))
            }
        }
        let just_fits = cfg(&format!("<eps = {}>", tree(5)));
        assert_eq!(just_fits.agent_count(), 64);
        assert!(canonicalize(&just_fits).is_ok());

        let too_big = cfg(&format!("<eps = {}, eps = eps>", tree(5)));
        assert_eq!(
            canonicalize(&too_big),
            Err(CanonError::TooLarge {
                agents: 66,
                cap: DEFAULT_AGENT_CAP
            })
        );
        assert!(canonicalize_with_cap(&too_big, 66).is_ok());
    }

    #[test]
    fn keys_agree_with_canonical_equality() {
        let a = cfg("<del(eps,x) = gam(x,eps)>");
        let b = cfg("<gam(y,eps) = del(eps,y)>");
        let c = cfg("<del(x,eps) = gam(x,eps)>");
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        assert_ne!(canonical_key(&a).unwrap(), canonical_key(&c).unwrap());
    }
}
