//! Concrete textual grammar for interaction systems and configurations.
//!
//! ```text
//! system  := "agents" agentdecl ("," agentdecl)* ";" rule*
//! agentdecl := IDENT "/" NAT
//! rule    := "rule" IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
//! config  := "<" (eq ("," eq)*)? ">" ("interface" IDENT ("," IDENT)* ";")?
//! eq      := term "=" term
//! term    := IDENT ("(" terms ")")?
//! terms   := term ("," term)*
//! ```
//!
//! Comments run from `#` to end of line; whitespace is insignificant. An
//! identifier is an agent iff it is declared in the signature, otherwise it
//! is a name. Arity-0 agents may be written with or without parentheses.
//! The Unicode forms `⊠`, `⟨`, `⟩`, `ε`, `δ`, `γ` are accepted on input
//! (mapping to `><`, `<`, `>`, `eps`, `del`, `gam`) and never emitted.

use std::fmt;

use crate::ast::{AgentId, Configuration, Equation, NameId, NamePool, Signature, Term};
use crate::rule::{validate_rule, InteractionSystem, Rule, RuleKey};

/// A parse or validation diagnostic with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Comma,
    Semi,
    Slash,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Lt,
    Gt,
    Equals,
    Bowtie,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LBrack => write!(f, "`[`"),
            Tok::RBrack => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Bowtie => write!(f, "`><`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut column = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    loop {
        let pos = Pos { line, column };
        let Some(&c) = chars.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, pos));
            }
            ';' => {
                bump!();
                out.push((Tok::Semi, pos));
            }
            '/' => {
                bump!();
                out.push((Tok::Slash, pos));
            }
            '[' => {
                bump!();
                out.push((Tok::LBrack, pos));
            }
            ']' => {
                bump!();
                out.push((Tok::RBrack, pos));
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, pos));
            }
            '=' => {
                bump!();
                out.push((Tok::Equals, pos));
            }
            '<' | '⟨' => {
                bump!();
                out.push((Tok::Lt, pos));
            }
            '⟩' => {
                bump!();
                out.push((Tok::Gt, pos));
            }
            '>' => {
                bump!();
                if chars.peek() == Some(&'<') {
                    bump!();
                    out.push((Tok::Bowtie, pos));
                } else {
                    out.push((Tok::Gt, pos));
                }
            }
            '⊠' => {
                bump!();
                out.push((Tok::Bowtie, pos));
            }
            'ε' => {
                bump!();
                out.push((Tok::Ident("eps".into()), pos));
            }
            'δ' => {
                bump!();
                out.push((Tok::Ident("del".into()), pos));
            }
            'γ' => {
                bump!();
                out.push((Tok::Ident("gam".into()), pos));
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                match n.parse() {
                    Ok(v) => out.push((Tok::Nat(v), pos)),
                    Err(_) => {
                        return Err(ParseError {
                            line: pos.line,
                            column: pos.column,
                            message: format!("number `{n}` is out of range"),
                            expected: vec![],
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(ident), pos));
            }
            other => {
                return Err(ParseError {
                    line: pos.line,
                    column: pos.column,
                    message: format!("unexpected character `{other}`"),
                    expected: vec![],
                })
            }
        }
    }
}

/// Recursive-descent parser over the token stream. Syntax errors abort at
/// the first offense; semantic violations (arities, occurrence counts,
/// rule table problems) are collected so one pass reports them all.
struct Parser {
    tokens: Vec<(Tok, Pos)>,
    cursor: usize,
    errors: Vec<ParseError>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lex(src)?,
            cursor: 0,
            errors: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.cursor].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.cursor].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn error_here(&self, message: String, expected: Vec<String>) -> ParseError {
        let pos = self.pos();
        ParseError {
            line: pos.line,
            column: pos.column,
            message,
            expected,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error_here(format!("found {}", self.peek()), vec![tok.to_string()]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().1;
                Ok((s, pos))
            }
            other => Err(self.error_here(format!("found {other}"), vec![what.to_string()])),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().1),
            other => Err(self.error_here(format!("found {other}"), vec![format!("`{kw}`")])),
        }
    }

    fn semantic(&mut self, pos: Pos, message: String) {
        self.errors.push(ParseError {
            line: pos.line,
            column: pos.column,
            message,
            expected: vec![],
        });
    }

    /// term := IDENT ("(" terms ")")?
    fn term(
        &mut self,
        sig: &Signature,
        pool: &mut NamePool,
        names_at: &mut Vec<(NameId, Pos)>,
    ) -> Result<Term, ParseError> {
        let (ident, pos) = self.expect_ident("a term")?;
        match sig.lookup(&ident) {
            Some(agent) => {
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = if *self.peek() == Tok::RParen {
                        Vec::new()
                    } else {
                        self.terms(sig, pool, names_at)?
                    };
                    self.expect(Tok::RParen)?;
                    args
                } else {
                    Vec::new()
                };
                let expected = sig.arity(agent);
                if args.len() != expected {
                    self.semantic(
                        pos,
                        format!(
                            "agent `{ident}` applied to {} argument(s), arity is {expected}",
                            args.len()
                        ),
                    );
                }
                Ok(Term::Agent(agent, args))
            }
            None => {
                if *self.peek() == Tok::LParen {
                    return Err(ParseError {
                        line: pos.line,
                        column: pos.column,
                        message: format!(
                            "`{ident}` is not a declared agent but is applied to arguments"
                        ),
                        expected: vec![],
                    });
                }
                let id = pool.intern(&ident);
                names_at.push((id, pos));
                Ok(Term::Name(id))
            }
        }
    }

    fn terms(
        &mut self,
        sig: &Signature,
        pool: &mut NamePool,
        names_at: &mut Vec<(NameId, Pos)>,
    ) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term(sig, pool, names_at)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.term(sig, pool, names_at)?);
        }
        Ok(out)
    }

    /// config := "<" (eq ("," eq)*)? ">" ("interface" IDENT ("," IDENT)* ";")?
    fn configuration(&mut self, sig: &Signature) -> Result<Configuration, ParseError> {
        let mut config = Configuration::new();
        let mut names_at: Vec<(NameId, Pos)> = Vec::new();

        self.expect(Tok::Lt)?;
        if *self.peek() != Tok::Gt {
            loop {
                let lhs = self.term(sig, &mut config.names, &mut names_at)?;
                self.expect(Tok::Equals)?;
                let rhs = self.term(sig, &mut config.names, &mut names_at)?;
                config.equations.push(Equation::new(lhs, rhs));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Gt)?;

        if matches!(self.peek(), Tok::Ident(s) if s == "interface") {
            self.bump();
            loop {
                let (ident, pos) = self.expect_ident("an interface name")?;
                if sig.lookup(&ident).is_some() {
                    self.semantic(
                        pos,
                        format!("`{ident}` is a declared agent and cannot be an interface name"),
                    );
                } else {
                    let id = config.names.intern(&ident);
                    config.interface.push(id);
                    names_at.push((id, pos));
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }

        // Arity problems were reported during term parsing; recheck the
        // occurrence invariants and attach first-occurrence positions.
        for violation in crate::ast::validate_configuration(&config, sig) {
            use crate::ast::Violation;
            match &violation {
                Violation::NameCount { name, .. } | Violation::DuplicateInterface { name } => {
                    let id = config.names.lookup(name).expect("reported name exists");
                    let pos = names_at
                        .iter()
                        .find(|(n, _)| *n == id)
                        .map(|(_, p)| *p)
                        .unwrap_or(Pos { line: 1, column: 1 });
                    self.semantic(pos, violation.to_string());
                }
                Violation::ArityMismatch { .. } | Violation::UnknownAgent { .. } => {}
            }
        }

        Ok(config)
    }

    fn rule_side(
        &mut self,
        sig: &Signature,
        pool: &mut NamePool,
        names_at: &mut Vec<(NameId, Pos)>,
    ) -> Result<(AgentId, Vec<Term>), ParseError> {
        let (ident, pos) = self.expect_ident("an agent name")?;
        let agent = sig.lookup(&ident).ok_or(ParseError {
            line: pos.line,
            column: pos.column,
            message: format!("`{ident}` is not a declared agent"),
            expected: vec![],
        })?;
        self.expect(Tok::LBrack)?;
        let terms = if *self.peek() == Tok::RBrack {
            Vec::new()
        } else {
            self.terms(sig, pool, names_at)?
        };
        self.expect(Tok::RBrack)?;
        let expected = sig.arity(agent);
        if terms.len() != expected {
            self.semantic(
                pos,
                format!(
                    "agent `{ident}` has arity {expected} but the rule side lists {} term(s)",
                    terms.len()
                ),
            );
        }
        Ok((agent, terms))
    }

    /// rule := "rule" IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
    fn rule(&mut self, sig: &Signature) -> Result<(Rule, Pos), ParseError> {
        let rule_pos = self.expect_keyword("rule")?;
        let mut pool = NamePool::new();
        let mut names_at: Vec<(NameId, Pos)> = Vec::new();

        let (alpha, alpha_side) = self.rule_side(sig, &mut pool, &mut names_at)?;
        self.expect(Tok::Bowtie)?;
        let (beta, beta_side) = self.rule_side(sig, &mut pool, &mut names_at)?;
        self.expect(Tok::Semi)?;

        let rule = Rule {
            alpha,
            alpha_side,
            beta,
            beta_side,
            names: pool,
        };

        // Occurrence and symmetry checks, positioned at the offending name
        // or at the rule head. Arity mismatches were reported while parsing.
        for err in validate_rule(&rule, sig) {
            use crate::rule::SystemError;
            if matches!(err, SystemError::RuleArity { .. }) {
                continue;
            }
            let pos = match &err {
                SystemError::NonLinearName { name, .. } => rule
                    .names
                    .lookup(name)
                    .and_then(|id| names_at.iter().find(|(n, _)| *n == id))
                    .map(|(_, p)| *p)
                    .unwrap_or(rule_pos),
                _ => rule_pos,
            };
            self.semantic(pos, err.to_string());
        }

        Ok((rule, rule_pos))
    }

    /// system := "agents" agentdecl ("," agentdecl)* ";" rule*
    ///
    /// Always returns a well-formed system built from the rules that
    /// validate; any dropped rule has left a diagnostic in `self.errors`,
    /// which fails the overall parse.
    fn system(&mut self) -> Result<InteractionSystem, ParseError> {
        self.expect_keyword("agents")?;
        let mut sig = Signature::new();
        loop {
            let (ident, pos) = self.expect_ident("an agent declaration")?;
            self.expect(Tok::Slash)?;
            let arity = match self.peek().clone() {
                Tok::Nat(n) => {
                    self.bump();
                    n
                }
                other => {
                    return Err(self.error_here(format!("found {other}"), vec!["an arity".into()]))
                }
            };
            if sig.declare(&ident, arity).is_err() {
                self.semantic(pos, format!("agent `{ident}` is declared twice"));
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Semi)?;

        let mut rules: Vec<(Rule, Pos)> = Vec::new();
        while matches!(self.peek(), Tok::Ident(s) if s == "rule") {
            let parsed = self.rule(&sig)?;
            rules.push(parsed);
        }

        let mut kept: Vec<Rule> = Vec::new();
        let mut seen: Vec<RuleKey> = Vec::new();
        for (rule, pos) in rules {
            let key = rule.key();
            if seen.contains(&key) {
                self.semantic(pos, format!("duplicate rule for pair {}", key.display(&sig)));
                continue;
            }
            seen.push(key);
            if validate_rule(&rule, &sig).is_empty() {
                kept.push(rule);
            }
        }

        Ok(InteractionSystem::build(sig, kept).expect("kept rules validate"))
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here(format!("found {}", self.peek()), vec!["end of input".into()]))
        }
    }

    fn into_errors(mut self, syntax_error: Option<ParseError>) -> Vec<ParseError> {
        self.errors.extend(syntax_error);
        self.errors.sort_by_key(|e| (e.line, e.column));
        self.errors
    }
}

/// Parses an interaction system. On success the returned system passes all
/// system invariants; otherwise every detected violation is reported with a
/// source position.
pub fn parse_system(src: &str) -> Result<InteractionSystem, Vec<ParseError>> {
    let mut parser = Parser::new(src).map_err(|e| vec![e])?;
    let result = parser.system().and_then(|sys| {
        parser.expect_eof()?;
        Ok(sys)
    });
    match result {
        Ok(sys) if parser.errors.is_empty() => Ok(sys),
        Ok(_) => Err(parser.into_errors(None)),
        Err(err) => Err(parser.into_errors(Some(err))),
    }
}

/// Parses a configuration against `sig`. The result passes
/// `validate_configuration`; violations come back with positions.
pub fn parse_configuration(src: &str, sig: &Signature) -> Result<Configuration, Vec<ParseError>> {
    let mut parser = Parser::new(src).map_err(|e| vec![e])?;
    let result = parser.configuration(sig).and_then(|config| {
        parser.expect_eof()?;
        Ok(config)
    });
    match result {
        Ok(config) if parser.errors.is_empty() => Ok(config),
        Ok(_) => Err(parser.into_errors(None)),
        Err(err) => Err(parser.into_errors(Some(err))),
    }
}

/// Parses a file holding a system optionally followed by one configuration
/// (the single-file CLI convenience).
pub fn parse_bundle(
    src: &str,
) -> Result<(InteractionSystem, Option<Configuration>), Vec<ParseError>> {
    let mut parser = Parser::new(src).map_err(|e| vec![e])?;
    let result = (|| {
        let sys = parser.system()?;
        let config = if *parser.peek() == Tok::Lt {
            Some(parser.configuration(&sys.signature)?)
        } else {
            None
        };
        parser.expect_eof()?;
        Ok((sys, config))
    })();
    match result {
        Ok(pair) if parser.errors.is_empty() => Ok(pair),
        Ok(_) => Err(parser.into_errors(None)),
        Err(err) => Err(parser.into_errors(Some(err))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::combinator_system;
    use crate::rule::same_rule_up_to_renaming;

    const COMBINATOR_SRC: &str = "agents eps/0, del/2, gam/2; \
        rule gam[x,y] >< gam[y,x]; \
        rule del[x,y] >< del[x,y]; \
        rule eps[] >< eps[]; \
        rule del[gam(x1,x2),gam(y1,y2)] >< gam[del(x1,y1),del(x2,y2)]; \
        rule eps[] >< gam[eps,eps]; \
        rule eps[] >< del[eps,eps];";

    #[test]
    fn parses_the_combinator_system() {
        let parsed = parse_system(COMBINATOR_SRC).expect("combinator source parses");
        let builtin = combinator_system();
        assert_eq!(parsed.rule_count(), 6);
        for (key, rule) in parsed.rules() {
            let other = builtin
                .rule(key.first(), key.second())
                .expect("builtin covers the same pairs");
            assert!(
                same_rule_up_to_renaming(rule, other),
                "{} differs from the builtin",
                key.display(&parsed.signature)
            );
        }
    }

    #[test]
    fn smallest_self_annihilating_system() {
        let sys = parse_system("agents a/0; rule a[] >< a[];").unwrap();
        assert_eq!(sys.rule_count(), 1);
        assert_eq!(sys.signature.len(), 1);
    }

    #[test]
    fn rule_linearity_violations_are_positioned() {
        let errs = parse_system("agents a/1; rule a[x] >< a[y];").unwrap_err();
        assert_eq!(errs.len(), 2, "{errs:?}");
        assert!(errs.iter().any(|e| e.message.contains("`x`")));
        assert!(errs.iter().any(|e| e.message.contains("`y`")));
        assert!(errs.iter().all(|e| e.message.contains("occurs 1 time(s)")));
        // Positions point at the names inside the rule body.
        assert!(errs.iter().all(|e| e.line == 1 && e.column > 12));
    }

    #[test]
    fn parses_the_paper_configuration() {
        let sys = combinator_system();
        let c = parse_configuration("<del(eps,x) = gam(x,eps)>", &sys.signature).unwrap();
        assert_eq!(c.equations.len(), 1);
        assert!(c.interface.is_empty());
        assert_eq!(c.agent_count(), 4);
    }

    #[test]
    fn parses_the_empty_configuration() {
        let sys = combinator_system();
        let c = parse_configuration("<>", &sys.signature).unwrap();
        assert!(c.equations.is_empty());
    }

    #[test]
    fn parses_an_interface_clause() {
        let sys = combinator_system();
        let c = parse_configuration("<r = gam(eps,eps)> interface r;", &sys.signature).unwrap();
        assert_eq!(c.equations.len(), 1);
        assert_eq!(c.interface_surfaces(), vec!["r"]);
    }

    #[test]
    fn unicode_aliases_are_accepted() {
        let sys = combinator_system();
        let ascii = parse_configuration("<del(eps,x) = gam(x,eps)>", &sys.signature).unwrap();
        let unicode = parse_configuration("⟨δ(ε, x) = γ(x, ε)⟩", &sys.signature).unwrap();
        assert!(crate::canon::alpha_equivalent(&ascii, &unicode).unwrap());

        let sys2 = parse_system("agents ε/0, δ/2, γ/2; rule ε[] ⊠ γ[ε,ε];").unwrap();
        assert!(sys2.signature.lookup("eps").is_some());
        assert_eq!(sys2.rule_count(), 1);
    }

    #[test]
    fn zero_arity_agents_accept_optional_parentheses() {
        let sys = combinator_system();
        let a = parse_configuration("<eps = eps>", &sys.signature).unwrap();
        let b = parse_configuration("<eps() = eps()>", &sys.signature).unwrap();
        assert!(crate::canon::alpha_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn comments_and_whitespace_are_insignificant() {
        let sys = parse_system(
            "agents a/0; # trailing comment\n# a full-line comment\nrule a[] >< a[] ;",
        )
        .unwrap();
        assert_eq!(sys.rule_count(), 1);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let sys = combinator_system();
        let errs =
            parse_configuration("<del(eps,x) =\n= gam(x,eps)>", &sys.signature).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!((errs[0].line, errs[0].column), (2, 1));
        assert!(!errs[0].expected.is_empty());
    }

    #[test]
    fn occurrence_violations_are_positioned() {
        let sys = combinator_system();
        let errs = parse_configuration("<x = gam(eps , eps)>", &sys.signature).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("occurs 1 time(s)"));
        assert_eq!((errs[0].line, errs[0].column), (1, 2));
    }

    #[test]
    fn arity_mismatch_is_positioned() {
        let sys = combinator_system();
        let errs = parse_configuration("<gam(x) = eps, x = eps>", &sys.signature).unwrap_err();
        assert!(errs[0].message.contains("arity is 2"));
        assert_eq!((errs[0].line, errs[0].column), (1, 2));
    }

    #[test]
    fn duplicate_pair_rule_is_rejected_with_position() {
        let errs = parse_system("agents a/0;\nrule a[] >< a[];\nrule a[] >< a[];").unwrap_err();
        assert!(errs[0].message.contains("duplicate rule"));
        assert_eq!(errs[0].line, 3);
    }

    #[test]
    fn undeclared_agent_in_head_position_is_an_error() {
        let errs = parse_system("agents a/0; rule b[] >< a[];").unwrap_err();
        assert!(errs[0].message.contains("not a declared agent"));
    }

    #[test]
    fn agents_cannot_be_interface_names() {
        let sys = combinator_system();
        let errs = parse_configuration("<eps = eps> interface eps;", &sys.signature).unwrap_err();
        assert!(errs[0].message.contains("cannot be an interface name"));
    }

    #[test]
    fn bundles_carry_an_optional_configuration() {
        let (sys, config) =
            parse_bundle("agents a/0, b/1;\nrule a[] >< b[a];\n<a = b(x), x = a>").unwrap();
        assert_eq!(sys.rule_count(), 1);
        assert_eq!(config.unwrap().equations.len(), 2);

        let (_, none) = parse_bundle("agents a/0; rule a[] >< a[];").unwrap();
        assert!(none.is_none());
    }
}
