//! Brute-force verification of the model's signature properties on small
//! instances: exhaustive reduction graphs, the one-step diamond property,
//! normal-form uniqueness, and strategy-independence of interaction counts.
//!
//! States are α-equivalence classes: every node is a canonical configuration
//! and every edge is one interaction followed by eager indirection
//! resolution and canonicalization. At this granularity the diamond property
//! is literally testable.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ast::{AgentId, Configuration, Equation, NameId, NamePool, Signature, Term};
use crate::canon::{canonical_form, canonical_key_with_cap, CanonError, CanonicalKey, DEFAULT_AGENT_CAP};
use crate::engine::{
    apply_interaction, find_redexes, normalize, resolve_indirections, NormalizeStatus, StepInfo,
    Strategy,
};
use crate::rule::InteractionSystem;

/// Exhaustive one-interaction successor graph over canonical states.
/// `truncated` is set when the node cap or the canonicalization cap stopped
/// expansion; only non-truncated graphs support conclusive checks.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    pub nodes: Vec<Configuration>,
    pub keys: Vec<CanonicalKey>,
    /// Terminal classification per node; `None` for interior nodes.
    pub terminal: Vec<Option<NormalizeStatus>>,
    pub edges: Vec<GraphEdge>,
    pub root: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub info: StepInfo,
    pub to: usize,
}

impl ReductionGraph {
    pub fn successor_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut successors = vec![BTreeSet::new(); self.nodes.len()];
        for edge in &self.edges {
            successors[edge.from].insert(edge.to);
        }
        successors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Inconclusive {
    #[error("the reduction graph was truncated; the check is inconclusive")]
    Truncated,
    #[error("normalization exhausted its fuel; the check is inconclusive")]
    FuelExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiamondCounterexample {
    pub node: usize,
    pub left: usize,
    pub right: usize,
}

/// Outcome of the one-step diamond check. A failing report carries an
/// independently replayable counterexample: a node with two distinct
/// successors that admit no common one-step successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondReport {
    pub holds: bool,
    pub counterexample: Option<DiamondCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub unique: bool,
    pub normal_forms: Vec<usize>,
    pub stuck_sinks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub runs: usize,
    pub interaction_counts: BTreeSet<u64>,
    pub final_classes: usize,
}

/// Breadth-first closure of all one-interaction successors (each followed by
/// eager indirection and canonicalization) up to `max_nodes` nodes.
pub fn build_reduction_graph(
    config: &Configuration,
    system: &InteractionSystem,
    max_nodes: usize,
) -> Result<ReductionGraph, CanonError> {
    build_reduction_graph_with_cap(config, system, max_nodes, DEFAULT_AGENT_CAP)
}

pub fn build_reduction_graph_with_cap(
    config: &Configuration,
    system: &InteractionSystem,
    max_nodes: usize,
    canon_cap: usize,
) -> Result<ReductionGraph, CanonError> {
    let (resolved, _) = resolve_indirections(config);
    let (root_config, root_key) = canonical_form(&resolved, canon_cap)?;

    let mut graph = ReductionGraph {
        nodes: vec![root_config],
        keys: vec![root_key.clone()],
        terminal: vec![None],
        edges: Vec::new(),
        root: 0,
        truncated: false,
    };
    let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
    index.insert(root_key, 0);
    let mut queue = VecDeque::from([0usize]);

    while let Some(node) = queue.pop_front() {
        let report = find_redexes(&graph.nodes[node], system);
        if report.interactions.is_empty() {
            graph.terminal[node] = Some(if !report.norule.is_empty() {
                NormalizeStatus::StuckNorule
            } else if !report.deadlocks.is_empty() {
                NormalizeStatus::StuckDeadlock
            } else {
                NormalizeStatus::Normal
            });
            continue;
        }
        for redex in &report.interactions {
            let (next, info) =
                apply_interaction(&graph.nodes[node], redex.index, system).expect("redex applies");
            let (next, _) = resolve_indirections(&next);
            let (canon, key) = match canonical_form(&next, canon_cap) {
                Ok(pair) => pair,
                Err(CanonError::TooLarge { .. }) => {
                    graph.truncated = true;
                    continue;
                }
            };
            let to = match index.get(&key) {
                Some(&existing) => existing,
                None => {
                    if graph.nodes.len() >= max_nodes {
                        graph.truncated = true;
                        continue;
                    }
                    let id = graph.nodes.len();
                    graph.nodes.push(canon);
                    graph.keys.push(key.clone());
                    graph.terminal.push(None);
                    index.insert(key, id);
                    queue.push_back(id);
                    id
                }
            };
            graph.edges.push(GraphEdge {
                from: node,
                info,
                to,
            });
        }
    }
    Ok(graph)
}

/// Verifies the one-step diamond property: whenever a node has two distinct
/// successors, they share a common successor one step further.
pub fn check_diamond(graph: &ReductionGraph) -> Result<DiamondReport, Inconclusive> {
    if graph.truncated {
        return Err(Inconclusive::Truncated);
    }
    let successors = graph.successor_sets();
    for node in 0..graph.nodes.len() {
        let succ: Vec<usize> = successors[node].iter().copied().collect();
        for (i, &left) in succ.iter().enumerate() {
            for &right in &succ[i + 1..] {
                if successors[left].intersection(&successors[right]).next().is_none() {
                    return Ok(DiamondReport {
                        holds: false,
                        counterexample: Some(DiamondCounterexample { node, left, right }),
                    });
                }
            }
        }
    }
    Ok(DiamondReport {
        holds: true,
        counterexample: None,
    })
}

/// True iff all sinks that are genuinely normal (no deadlock, no missing
/// rule) form a single canonical class. Stuck sinks are reported separately
/// and excluded from the uniqueness claim.
pub fn check_unique_normal_form(graph: &ReductionGraph) -> Result<UniquenessReport, Inconclusive> {
    if graph.truncated {
        return Err(Inconclusive::Truncated);
    }
    let mut normal_forms = Vec::new();
    let mut stuck_sinks = Vec::new();
    for (node, status) in graph.terminal.iter().enumerate() {
        match status {
            Some(NormalizeStatus::Normal) => normal_forms.push(node),
            Some(_) => stuck_sinks.push(node),
            None => {}
        }
    }
    Ok(UniquenessReport {
        unique: normal_forms.len() <= 1,
        normal_forms,
        stuck_sinks,
    })
}

/// Runs `fifo`, `lifo`, `by-index`, and `trials` seeded random strategies;
/// the report is invariant iff every run agrees on the interaction count and
/// the final α-class. Fuel exhaustion in any run makes the check
/// inconclusive.
pub fn check_step_invariance(
    config: &Configuration,
    system: &InteractionSystem,
    trials: usize,
    seed: u64,
    fuel: u64,
) -> Result<InvarianceReport, Inconclusive> {
    let mut strategies = vec![Strategy::Fifo, Strategy::Lifo, Strategy::ByIndex];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    strategies.extend((0..trials).map(|_| Strategy::Random(rng.random())));

    let mut counts = BTreeSet::new();
    let mut classes = BTreeSet::new();
    let runs = strategies.len();
    for strategy in strategies {
        let result = normalize(config, system, strategy, fuel, false);
        if result.status == NormalizeStatus::FuelExhausted {
            return Err(Inconclusive::FuelExhausted);
        }
        counts.insert(result.interactions);
        let cap = DEFAULT_AGENT_CAP.max(result.config.agent_count());
        let key = canonical_key_with_cap(&result.config, cap)
            .expect("cap covers the final configuration");
        classes.insert(key);
    }
    Ok(InvarianceReport {
        invariant: counts.len() == 1 && classes.len() == 1,
        runs,
        interaction_counts: counts,
        final_classes: classes.len(),
    })
}

/// Length of the shortest interaction-edge cycle from the root back to the
/// root, if one exists among the explored nodes. Works on truncated graphs.
pub fn shortest_cycle_through_root(graph: &ReductionGraph) -> Option<usize> {
    let successors = graph.successor_sets();
    let mut dist = vec![usize::MAX; graph.nodes.len()];
    dist[graph.root] = 0;
    let mut queue = VecDeque::from([graph.root]);
    while let Some(node) = queue.pop_front() {
        for &next in &successors[node] {
            if dist[next] == usize::MAX {
                dist[next] = dist[node] + 1;
                queue.push_back(next);
            }
        }
    }
    graph
        .edges
        .iter()
        .filter(|e| e.to == graph.root && dist[e.from] != usize::MAX)
        .map(|e| dist[e.from] + 1)
        .min()
}

/// Seed-deterministic generator of valid configurations: a random well-arity
/// term forest whose dangling names are paired randomly, with
/// `interface_size` names reserved for the interface. Parity constraints can
/// make a requested interface size unsatisfiable for some signatures (for
/// example, a signature whose every agent has arity 1 only admits even
/// interface sizes); after repeated failures the requested size is relaxed
/// downward so the generator always terminates.
pub fn generate_random_configuration(
    sig: &Signature,
    max_agents: usize,
    interface_size: usize,
    seed: u64,
) -> Configuration {
    assert!(!sig.is_empty(), "signature must declare at least one agent");
    let max_agents = max_agents.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut iface_target = interface_size;
    let mut attempt = 0usize;
    loop {
        if let Some(config) = try_generate(sig, max_agents, iface_target, &mut rng) {
            debug_assert!(
                crate::ast::validate_configuration(&config, sig).is_empty(),
                "generator postcondition"
            );
            return config;
        }
        attempt += 1;
        if attempt % 16 == 0 && iface_target > 0 {
            iface_target -= 1;
        }
    }
}

/// A side of a prospective equation: a grown tree or a bare name slot.
enum SideKind {
    Tree(usize),
    Hole(usize),
}

fn grow_tree(
    sig: &Signature,
    budget: &mut usize,
    holes: &mut usize,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Term {
    let agent = AgentId(rng.random_range(0..sig.len() as u32));
    *budget -= 1;
    let arity = sig.arity(agent);
    let args = (0..arity)
        .map(|_| {
            if *budget > 0 && depth < 8 && rng.random_bool(0.6) {
                grow_tree(sig, budget, holes, depth + 1, rng)
            } else {
                let slot = *holes;
                *holes += 1;
                Term::Name(NameId(slot as u32))
            }
        })
        .collect();
    Term::Agent(agent, args)
}

fn remap_term(term: &Term, map: &HashMap<usize, NameId>) -> Term {
    match term {
        Term::Agent(id, args) => {
            Term::Agent(*id, args.iter().map(|t| remap_term(t, map)).collect())
        }
        Term::Name(slot) => Term::Name(map[&(slot.0 as usize)]),
    }
}

fn try_generate(
    sig: &Signature,
    max_agents: usize,
    interface_size: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Configuration> {
    let target = rng.random_range(1..=max_agents);
    let mut budget = target;
    let mut holes = 0usize;
    let mut trees = Vec::new();
    while budget > 0 {
        trees.push(grow_tree(sig, &mut budget, &mut holes, 0, rng));
    }

    // Equation sides pair up, and name-occurrence slots (holes, bare sides,
    // interface entries) pair up too; bare name sides fix the side parity
    // and occasionally add name-to-name equations for variety.
    let mut bare = trees.len() % 2;
    if rng.random_bool(0.3) {
        bare += 2;
    }
    let total_slots = holes + bare;
    if (total_slots + interface_size) % 2 != 0 || total_slots < interface_size {
        return None;
    }

    let mut sides: Vec<SideKind> = (0..trees.len()).map(SideKind::Tree).collect();
    sides.extend((0..bare).map(|b| SideKind::Hole(holes + b)));
    sides.shuffle(rng);

    let mut slots: Vec<usize> = (0..total_slots).collect();
    slots.shuffle(rng);

    let mut pool = NamePool::new();
    let mut map: HashMap<usize, NameId> = HashMap::new();
    let interface: Vec<NameId> = (0..interface_size)
        .map(|k| {
            let id = pool.intern(&format!("r{k}"));
            map.insert(slots[k], id);
            id
        })
        .collect();
    for pair in slots[interface_size..].chunks(2) {
        let id = pool.fresh();
        map.insert(pair[0], id);
        map.insert(pair[1], id);
    }

    let term_of = |side: &SideKind| match side {
        SideKind::Tree(i) => remap_term(&trees[*i], &map),
        SideKind::Hole(slot) => Term::Name(map[slot]),
    };
    let equations = sides
        .chunks(2)
        .map(|pair| Equation::new(term_of(&pair[0]), term_of(&pair[1])))
        .collect();

    Some(Configuration {
        equations,
        interface,
        names: pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::validate_configuration;
    use crate::canon::alpha_equivalent;
    use crate::combinators::combinator_system;
    use crate::parser::parse_configuration;

    fn cfg(src: &str) -> Configuration {
        let sys = combinator_system();
        parse_configuration(src, &sys.signature).expect("test input parses")
    }

    #[test]
    fn eps_annihilation_yields_two_nodes_and_one_edge() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = eps>"), &sys, 100).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(!g.truncated);
        assert_eq!(g.terminal[1], Some(NormalizeStatus::Normal));
        assert!(g.nodes[1].equations.is_empty());
    }

    #[test]
    fn tree_erasure_graph_has_longest_path_three() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = gam(eps,eps)>"), &sys, 100).unwrap();
        assert!(!g.truncated);
        // Longest interaction path in this DAG.
        fn longest(g: &ReductionGraph, node: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(hit) = memo[node] {
                return hit;
            }
            let best = g
                .edges
                .iter()
                .filter(|e| e.from == node)
                .map(|e| 1 + longest(g, e.to, memo))
                .max()
                .unwrap_or(0);
            memo[node] = Some(best);
            best
        }
        let mut memo = vec![None; g.nodes.len()];
        assert_eq!(longest(&g, g.root, &mut memo), 3);
    }

    #[test]
    fn paper_configuration_graph_contains_the_cycle() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<del(eps,x) = gam(x,eps)>"), &sys, 100).unwrap();
        // The graph of a size-growing net truncates at the cap, but the
        // cycle through the root's class is already present.
        assert_eq!(shortest_cycle_through_root(&g), Some(4));
    }

    #[test]
    fn diamond_holds_on_a_branching_graph() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = gam(eps,eps), eps = del(eps,eps)>"), &sys, 100)
            .unwrap();
        assert!(!g.truncated);
        let report = check_diamond(&g).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn diamond_holds_vacuously_without_branching() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = eps>"), &sys, 100).unwrap();
        assert!(check_diamond(&g).unwrap().holds);
    }

    #[test]
    fn removing_a_join_edge_is_caught() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = gam(eps,eps), eps = del(eps,eps)>"), &sys, 100)
            .unwrap();
        assert!(check_diamond(&g).unwrap().holds);
        let mut caught = false;
        for victim in 0..g.edges.len() {
            let mut corrupted = g.clone();
            corrupted.edges.remove(victim);
            if let Ok(report) = check_diamond(&corrupted) {
                if !report.holds {
                    assert!(report.counterexample.is_some());
                    caught = true;
                }
            }
        }
        assert!(caught, "some single edge removal must break the diamond");
    }

    #[test]
    fn truncated_graphs_are_inconclusive() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<del(eps,x) = gam(x,eps)>"), &sys, 3).unwrap();
        assert!(g.truncated);
        assert_eq!(check_diamond(&g), Err(Inconclusive::Truncated));
        assert_eq!(check_unique_normal_form(&g), Err(Inconclusive::Truncated));
    }

    #[test]
    fn unique_normal_form_on_tree_erasure() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<eps = gam(eps,eps)>"), &sys, 100).unwrap();
        let report = check_unique_normal_form(&g).unwrap();
        assert!(report.unique);
        assert_eq!(report.normal_forms.len(), 1);
        assert!(g.nodes[report.normal_forms[0]].equations.is_empty());
        assert!(report.stuck_sinks.is_empty());
    }

    #[test]
    fn single_node_graph_is_trivially_unique() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<r = gam(eps,eps)> interface r;"), &sys, 100).unwrap();
        assert_eq!(g.nodes.len(), 1);
        let report = check_unique_normal_form(&g).unwrap();
        assert!(report.unique);
        assert_eq!(report.normal_forms, vec![0]);
    }

    #[test]
    fn deadlocked_sinks_are_reported_separately() {
        let sys = combinator_system();
        let g = build_reduction_graph(&cfg("<x = x>"), &sys, 100).unwrap();
        let report = check_unique_normal_form(&g).unwrap();
        assert!(report.unique, "no normal sinks at all");
        assert!(report.normal_forms.is_empty());
        assert_eq!(report.stuck_sinks, vec![0]);
    }

    #[test]
    fn step_invariance_on_a_duplication() {
        let sys = combinator_system();
        let c = cfg("<del(r1,r2) = gam(eps,eps)> interface r1, r2;");
        let report = check_step_invariance(&c, &sys, 10, 99, 10_000).unwrap();
        assert!(report.invariant, "{report:?}");
        assert_eq!(report.runs, 13);
        assert_eq!(report.interaction_counts.len(), 1);
    }

    #[test]
    fn step_invariance_on_the_trivial_pair() {
        let sys = combinator_system();
        let report = check_step_invariance(&cfg("<eps = eps>"), &sys, 5, 7, 100).unwrap();
        assert!(report.invariant);
        assert_eq!(report.interaction_counts.iter().next(), Some(&1));
    }

    #[test]
    fn nonterminating_invariance_is_inconclusive() {
        let sys = combinator_system();
        let c = cfg("<del(eps,x) = gam(x,eps)>");
        assert_eq!(
            check_step_invariance(&c, &sys, 2, 1, 50),
            Err(Inconclusive::FuelExhausted)
        );
    }

    #[test]
    fn generator_is_seed_deterministic_and_valid() {
        let sys = combinator_system();
        for seed in 0..200 {
            let a = generate_random_configuration(&sys.signature, 12, (seed % 3) as usize, seed);
            let b = generate_random_configuration(&sys.signature, 12, (seed % 3) as usize, seed);
            assert_eq!(a, b, "seed {seed} is not deterministic");
            assert!(
                validate_configuration(&a, &sys.signature).is_empty(),
                "seed {seed} generated an invalid configuration"
            );
            assert!(a.agent_count() <= 12);
        }
    }

    #[test]
    fn generator_respects_interface_requests_when_satisfiable() {
        let sys = combinator_system();
        let c = generate_random_configuration(&sys.signature, 10, 2, 5);
        assert_eq!(c.interface.len(), 2);
    }

    #[test]
    fn generator_relaxes_unsatisfiable_interface_sizes() {
        // Every agent has arity 1: any configuration has an even number of
        // loose ends, so an odd interface size cannot be met.
        let mut sig = Signature::new();
        sig.declare("a", 1).unwrap();
        let c = generate_random_configuration(&sig, 6, 1, 3);
        assert!(validate_configuration(&c, &sig).is_empty());
        assert!(c.interface.len() < 1 || c.interface.len() % 2 == 0);
    }

    #[test]
    fn graph_roots_are_canonical() {
        let sys = combinator_system();
        let c = cfg("<del(eps,q) = gam(q,eps)>");
        let g = build_reduction_graph(&c, &sys, 50).unwrap();
        assert!(alpha_equivalent(&g.nodes[g.root], &c).unwrap());
        let recanon = crate::canon::canonicalize(&g.nodes[g.root]).unwrap();
        assert_eq!(recanon, g.nodes[g.root]);
    }
}
