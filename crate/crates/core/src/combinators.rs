//! The builtin interaction-combinator system over `{eps, del, gam}` and
//! programmatic instantiation of the erasing and duplication rule schemas
//! for arbitrary signatures.

use thiserror::Error;

use crate::ast::{AgentId, NamePool, Signature, Term};
use crate::rule::{InteractionSystem, Rule};

/// Agent ids of the builtin combinator signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombinatorNames {
    pub eps: AgentId,
    pub del: AgentId,
    pub gam: AgentId,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("eraser agent must have arity 0, `{agent}` has arity {arity}")]
    EraserArity { agent: String, arity: usize },
    #[error("duplicator agent must have arity 2, `{agent}` has arity {arity}")]
    DuplicatorArity { agent: String, arity: usize },
    #[error("agent id {0} is not in the signature")]
    UnknownAgent(AgentId),
}

/// The combinator signature `eps/0, del/2, gam/2`, in that declaration order.
pub fn combinator_signature() -> (Signature, CombinatorNames) {
    let mut sig = Signature::new();
    let eps = sig.declare("eps", 0).expect("fresh signature");
    let del = sig.declare("del", 2).expect("fresh signature");
    let gam = sig.declare("gam", 2).expect("fresh signature");
    (sig, CombinatorNames { eps, del, gam })
}

/// One erasing rule `eps[] >< alpha[eps,...,eps]` per agent `alpha` in the
/// signature, including `alpha = eps` itself (which yields `eps[] >< eps[]`).
pub fn instantiate_erasing(sig: &Signature, eps: AgentId) -> Result<Vec<Rule>, SchemaError> {
    let eraser = sig.get(eps).ok_or(SchemaError::UnknownAgent(eps))?;
    if eraser.arity != 0 {
        return Err(SchemaError::EraserArity {
            agent: eraser.name.clone(),
            arity: eraser.arity,
        });
    }
    Ok(sig
        .iter()
        .map(|(alpha, ty)| Rule {
            alpha: eps,
            alpha_side: Vec::new(),
            beta: alpha,
            beta_side: vec![Term::Agent(eps, Vec::new()); ty.arity],
            names: NamePool::new(),
        })
        .collect())
}

/// One duplication rule
/// `del[alpha(x1,...,xn), alpha(y1,...,yn)] >< alpha[del(x1,y1),...,del(xn,yn)]`
/// per agent `alpha != del`. The `del`/`del` pair is governed by annihilation,
/// not by this schema.
pub fn instantiate_duplication(sig: &Signature, del: AgentId) -> Result<Vec<Rule>, SchemaError> {
    let duplicator = sig.get(del).ok_or(SchemaError::UnknownAgent(del))?;
    if duplicator.arity != 2 {
        return Err(SchemaError::DuplicatorArity {
            agent: duplicator.name.clone(),
            arity: duplicator.arity,
        });
    }
    Ok(sig
        .iter()
        .filter(|&(alpha, _)| alpha != del)
        .map(|(alpha, ty)| {
            let mut names = NamePool::new();
            let xs: Vec<_> = (0..ty.arity)
                .map(|i| names.intern(&format!("x{}", i + 1)))
                .collect();
            let ys: Vec<_> = (0..ty.arity)
                .map(|i| names.intern(&format!("y{}", i + 1)))
                .collect();
            Rule {
                alpha: del,
                alpha_side: vec![
                    Term::Agent(alpha, xs.iter().map(|&x| Term::Name(x)).collect()),
                    Term::Agent(alpha, ys.iter().map(|&y| Term::Name(y)).collect()),
                ],
                beta: alpha,
                beta_side: xs
                    .iter()
                    .zip(&ys)
                    .map(|(&x, &y)| Term::Agent(del, vec![Term::Name(x), Term::Name(y)]))
                    .collect(),
                names,
            }
        })
        .collect())
}

/// The six-rule interaction-combinator system: the two annihilations
/// `gam[x,y] >< gam[y,x]` and `del[x,y] >< del[x,y]`, the erasing rules for
/// all three agents, and the duplication rule for `gam`. The `eps`/`del`
/// pair is resolved in favor of erasing; at arity 0 the duplication schema
/// would rewrite it identically anyway, but only one rule per pair may load.
pub fn combinator_system() -> InteractionSystem {
    let (sig, names) = combinator_signature();
    let CombinatorNames { eps, del, gam } = names;

    let mut rules = Vec::new();

    // gam[x,y] >< gam[y,x]
    {
        let mut pool = NamePool::new();
        let x = pool.intern("x");
        let y = pool.intern("y");
        rules.push(Rule {
            alpha: gam,
            alpha_side: vec![Term::Name(x), Term::Name(y)],
            beta: gam,
            beta_side: vec![Term::Name(y), Term::Name(x)],
            names: pool,
        });
    }

    // del[x,y] >< del[x,y]
    {
        let mut pool = NamePool::new();
        let x = pool.intern("x");
        let y = pool.intern("y");
        rules.push(Rule {
            alpha: del,
            alpha_side: vec![Term::Name(x), Term::Name(y)],
            beta: del,
            beta_side: vec![Term::Name(x), Term::Name(y)],
            names: pool,
        });
    }

    rules.extend(instantiate_erasing(&sig, eps).expect("eps has arity 0"));

    let duplication = instantiate_duplication(&sig, del).expect("del has arity 2");
    rules.extend(
        duplication
            .into_iter()
            .filter(|r| r.beta == gam || r.alpha == gam),
    );

    InteractionSystem::build(sig, rules).expect("builtin system validates")
}

/// Ids of the builtin agents inside [`combinator_system`]'s signature.
pub fn combinator_names(sys: &InteractionSystem) -> CombinatorNames {
    CombinatorNames {
        eps: sys.signature.lookup("eps").expect("builtin eps"),
        del: sys.signature.lookup("del").expect("builtin del"),
        gam: sys.signature.lookup("gam").expect("builtin gam"),
    }
}
