//! DOT export of configurations as port graphs.
//!
//! One node per agent occurrence (labeled `name/arity`), one node per
//! interface name. Edges connect ports: port 0 is the principal port,
//! ports 1..arity are the auxiliary ports in argument order, and edges
//! joining two principal ports (active pairs) are emitted bold. Node
//! identifiers derive from canonical traversal order, so α-equivalent
//! configurations produce byte-identical output.

use std::collections::HashMap;
use std::fmt::Write;

use crate::ast::{Configuration, NameId, Signature, Term};
use crate::canon::{canonical_form, CanonError, DEFAULT_AGENT_CAP};

/// An attachment point in the port graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Endpoint {
    /// `(agent occurrence, port index)`, port 0 being the principal port.
    Port(usize, usize),
    /// Interface pin, by interface position.
    Pin(usize),
}

/// Wires are equivalence classes of endpoints connected through names.
struct Wires {
    parent: HashMap<WireNode, WireNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum WireNode {
    End(Endpoint),
    Name(NameId),
}

impl Wires {
    fn new() -> Self {
        Wires {
            parent: HashMap::new(),
        }
    }

    fn find(&mut self, node: WireNode) -> WireNode {
        let up = *self.parent.entry(node).or_insert(node);
        if up == node {
            node
        } else {
            let root = self.find(up);
            self.parent.insert(node, root);
            root
        }
    }

    fn union(&mut self, a: WireNode, b: WireNode) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }
}

pub fn render_dot(config: &Configuration, sig: &Signature) -> Result<String, CanonError> {
    render_dot_with_cap(config, sig, DEFAULT_AGENT_CAP)
}

pub fn render_dot_with_cap(
    config: &Configuration,
    sig: &Signature,
    canon_cap: usize,
) -> Result<String, CanonError> {
    let (canon, _) = canonical_form(config, canon_cap)?;

    let mut agents: Vec<String> = Vec::new(); // node labels in traversal order
    let mut direct_edges: Vec<(Endpoint, Endpoint)> = Vec::new();
    let mut wires = Wires::new();

    // Walks a term, emitting its agent occurrences; returns this term's
    // attachment (the root's principal port or the name's wire).
    fn walk(
        term: &Term,
        sig: &Signature,
        agents: &mut Vec<String>,
        direct: &mut Vec<(Endpoint, Endpoint)>,
        wires: &mut Wires,
    ) -> WireNode {
        match term {
            Term::Name(n) => WireNode::Name(*n),
            Term::Agent(id, args) => {
                let me = agents.len();
                let ty = sig.agent(*id);
                agents.push(format!("{}/{}", ty.name, ty.arity));
                for (i, arg) in args.iter().enumerate() {
                    let port = Endpoint::Port(me, i + 1);
                    match walk(arg, sig, agents, direct, wires) {
                        WireNode::End(child) => direct.push((port, child)),
                        name @ WireNode::Name(_) => wires.union(WireNode::End(port), name),
                    }
                }
                WireNode::End(Endpoint::Port(me, 0))
            }
        }
    }

    for eq in &canon.equations {
        let lhs = walk(&eq.lhs, sig, &mut agents, &mut direct_edges, &mut wires);
        let rhs = walk(&eq.rhs, sig, &mut agents, &mut direct_edges, &mut wires);
        match (lhs, rhs) {
            (WireNode::End(a), WireNode::End(b)) => direct_edges.push((a, b)),
            (a, b) => wires.union(a, b),
        }
    }
    for (pin, name) in canon.interface.iter().enumerate() {
        wires.union(WireNode::End(Endpoint::Pin(pin)), WireNode::Name(*name));
    }

    // Resolve wire classes into edges: a class with two attachment points
    // becomes an edge; a class with none is a closed loop (an x = x wire).
    let mut classes: HashMap<WireNode, Vec<Endpoint>> = HashMap::new();
    let mut class_order: Vec<WireNode> = Vec::new();
    let members: Vec<WireNode> = wires.parent.keys().copied().collect();
    for node in members {
        let root = wires.find(node);
        if !classes.contains_key(&root) {
            classes.insert(root, Vec::new());
            class_order.push(root);
        }
        if let WireNode::End(e) = node {
            classes.get_mut(&root).unwrap().push(e);
        }
    }

    let mut edges: Vec<(Endpoint, Endpoint)> = direct_edges;
    let mut loops = 0usize;
    class_order.sort();
    for root in class_order {
        let mut ends = classes.remove(&root).unwrap();
        ends.sort();
        ends.dedup();
        match ends.len() {
            0 => loops += 1,
            2 => edges.push((ends[0], ends[1])),
            // Valid configurations have exactly two occurrences per name;
            // anything else is rendered as a chain so the output stays
            // well-formed even on invalid input.
            _ => {
                for pair in ends.windows(2) {
                    edges.push((pair[0], pair[1]));
                }
            }
        }
    }

    for edge in &mut edges {
        if edge.1 < edge.0 {
            *edge = (edge.1, edge.0);
        }
    }
    edges.sort();

    let mut out = String::from("graph configuration {\n");
    for (i, label) in agents.iter().enumerate() {
        let _ = writeln!(out, "  a{i} [label=\"{label}\"];");
    }
    for (pin, name) in canon.interface.iter().enumerate() {
        let _ = writeln!(
            out,
            "  i{pin} [label=\"{}\", shape=circle];",
            canon.names.surface(*name)
        );
    }
    for k in 0..loops {
        let _ = writeln!(out, "  w{k} [label=\"\", shape=point];");
        let _ = writeln!(out, "  w{k} -- w{k};");
    }
    for (a, b) in &edges {
        let node = |e: &Endpoint| match e {
            Endpoint::Port(agent, _) => format!("a{agent}"),
            Endpoint::Pin(pin) => format!("i{pin}"),
        };
        let port = |e: &Endpoint| match e {
            Endpoint::Port(_, p) => p.to_string(),
            Endpoint::Pin(_) => "0".to_string(),
        };
        let active = matches!((a, b), (Endpoint::Port(_, 0), Endpoint::Port(_, 0)));
        let style = if active { ", style=bold" } else { "" };
        let _ = writeln!(
            out,
            "  {} -- {} [taillabel=\"{}\", headlabel=\"{}\"{}];",
            node(a),
            node(b),
            port(a),
            port(b),
            style
        );
    }
    out.push_str("}\n");
    Ok(out)
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
    fn paper_net_has_four_agents_and_one_active_edge() {
        let sys = combinator_system();
        let dot = render_dot(&cfg("<del(eps,x) = gam(x,eps)>"), &sys.signature).unwrap();
        let agent_nodes = dot.lines().filter(|l| l.trim_start().starts_with('a') && l.contains("label=")).count();
        assert_eq!(agent_nodes, 4);
        let active = dot.lines().filter(|l| l.contains("style=bold")).count();
        assert_eq!(active, 1);
        assert!(dot.contains("label=\"del/2\""));
        assert!(dot.contains("label=\"gam/2\""));
        assert!(dot.contains("label=\"eps/0\""));
    }

    #[test]
    fn empty_configuration_renders_a_header_only_graph() {
        let sys = combinator_system();
        let dot = render_dot(&cfg("<>"), &sys.signature).unwrap();
        assert_eq!(dot, "graph configuration {\n}\n");
    }

    #[test]
    fn alpha_equivalent_configurations_render_identically() {
        let sys = combinator_system();
        let a = render_dot(&cfg("<del(eps,p) = gam(p,eps)>"), &sys.signature).unwrap();
        let b = render_dot(&cfg("<gam(q,eps) = del(eps,q)>"), &sys.signature).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interface_names_become_pins() {
        let sys = combinator_system();
        let dot = render_dot(&cfg("<r = gam(eps,eps)> interface r;"), &sys.signature).unwrap();
        assert!(dot.contains("i0 [label=\"r\", shape=circle];"));
        assert!(dot.contains("i0 --") || dot.contains("-- i0"));
    }

    #[test]
    fn cyclic_wires_render_as_loops() {
        let sys = combinator_system();
        let dot = render_dot(&cfg("<x = x>"), &sys.signature).unwrap();
        assert!(dot.contains("w0 -- w0"));
    }
}
