//! Domain constraints such as `p*q^(-x-r) < a`.
//!
//! Parsing is delegated to `evalexpr`; the tree is then compiled to a small
//! f64 expression over variable slots, so `1/2` means one half and evaluation
//! needs no per-point context map.

use std::collections::BTreeSet;

use evalexpr::{build_operator_tree, DefaultNumericTypes, Node, Operator};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug)]
enum Cond {
    Cmp(Cmp, Expr, Expr),
    And(Box<Cond>, Box<Cond>),
}

/// A compiled comparison (or `&&`-conjunction of comparisons) over named
/// scan variables.
#[derive(Clone, Debug)]
pub struct Constraint {
    text: String,
    vars: BTreeSet<String>,
    cond: Cond,
}

impl Constraint {
    /// Compiles `text`; every identifier must appear in `names`, and its
    /// position there is the slot read during evaluation.
    pub fn parse(text: &str, names: &[&str]) -> Result<Self> {
        let bad = |msg: String| Error::InvalidSpec(format!("constraint `{text}`: {msg}"));
        let tree = build_operator_tree::<DefaultNumericTypes>(text).map_err(|e| bad(e.to_string()))?;
        let mut vars = BTreeSet::new();
        let cond = compile_cond(&tree, names, &mut vars).map_err(bad)?;
        Ok(Constraint {
            text: text.trim().to_string(),
            vars,
            cond,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// The set of variables the clause mentions; a user clause replaces any
    /// built-in clause over the same set.
    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn holds(&self, slots: &[f64]) -> bool {
        eval_cond(&self.cond, slots)
    }
}

fn unwrap_root(node: &Node<DefaultNumericTypes>) -> std::result::Result<&Node<DefaultNumericTypes>, String> {
    match (node.operator(), node.children()) {
        (Operator::RootNode, [child]) => unwrap_root(child),
        (Operator::RootNode, _) => Err("expected a single expression".into()),
        _ => Ok(node),
    }
}

fn compile_cond(
    node: &Node<DefaultNumericTypes>,
    names: &[&str],
    vars: &mut BTreeSet<String>,
) -> std::result::Result<Cond, String> {
    let node = unwrap_root(node)?;
    let kids = node.children();
    let cmp = match node.operator() {
        Operator::And => {
            let [l, r] = kids else {
                return Err("malformed `&&`".into());
            };
            return Ok(Cond::And(
                Box::new(compile_cond(l, names, vars)?),
                Box::new(compile_cond(r, names, vars)?),
            ));
        }
        Operator::Lt => Cmp::Lt,
        Operator::Leq => Cmp::Le,
        Operator::Gt => Cmp::Gt,
        Operator::Geq => Cmp::Ge,
        op => return Err(format!("expected a comparison (<, <=, >, >=), found {op:?}")),
    };
    let [l, r] = kids else {
        return Err("malformed comparison".into());
    };
    Ok(Cond::Cmp(
        cmp,
        compile_expr(l, names, vars)?,
        compile_expr(r, names, vars)?,
    ))
}

fn compile_expr(
    node: &Node<DefaultNumericTypes>,
    names: &[&str],
    vars: &mut BTreeSet<String>,
) -> std::result::Result<Expr, String> {
    let node = unwrap_root(node)?;
    let kids = node.children();
    let bin = |op: BinOp, vars: &mut BTreeSet<String>| -> std::result::Result<Expr, String> {
        let [l, r] = kids else {
            return Err("malformed binary operator".into());
        };
        Ok(Expr::Bin(
            op,
            Box::new(compile_expr(l, names, vars)?),
            Box::new(compile_expr(r, names, vars)?),
        ))
    };
    match node.operator() {
        Operator::Const { value } => value.as_number().map(Expr::Num).map_err(|e| e.to_string()),
        Operator::VariableIdentifierRead { identifier } => {
            let slot = names
                .iter()
                .position(|n| n == identifier)
                .ok_or_else(|| format!("unknown variable `{identifier}` (known: {})", names.join(", ")))?;
            vars.insert(identifier.clone());
            Ok(Expr::Var(slot))
        }
        Operator::Neg => match kids {
            [c] => Ok(Expr::Neg(Box::new(compile_expr(c, names, vars)?))),
            _ => Err("malformed negation".into()),
        },
        Operator::Add => bin(BinOp::Add, vars),
        Operator::Sub => bin(BinOp::Sub, vars),
        Operator::Mul => bin(BinOp::Mul, vars),
        Operator::Div => bin(BinOp::Div, vars),
        Operator::Exp => bin(BinOp::Pow, vars),
        op => Err(format!("unsupported operator {op:?}")),
    }
}

fn eval_expr(e: &Expr, slots: &[f64]) -> f64 {
    match e {
        Expr::Num(v) => *v,
        Expr::Var(i) => slots[*i],
        Expr::Neg(a) => -eval_expr(a, slots),
        Expr::Bin(op, a, b) => {
            let (a, b) = (eval_expr(a, slots), eval_expr(b, slots));
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
    }
}

fn eval_cond(c: &Cond, slots: &[f64]) -> bool {
    match c {
        Cond::And(a, b) => eval_cond(a, slots) && eval_cond(b, slots),
        Cond::Cmp(op, l, r) => {
            let (l, r) = (eval_expr(l, slots), eval_expr(r, slots));
            match op {
                Cmp::Lt => l < r,
                Cmp::Le => l <= r,
                Cmp::Gt => l > r,
                Cmp::Ge => l >= r,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: [&str; 5] = ["p", "q", "x", "r", "a"];

    #[test]
    fn float_semantics_and_precedence() {
        let c = Constraint::parse("1/2 > 0.4", &NAMES).unwrap();
        assert!(c.holds(&[0.0; 5]));
        let c = Constraint::parse("p*q^(-x-r) < a", &NAMES).unwrap();
        // 0.01 * 2^2.5 = 0.0566
        assert!(c.holds(&[0.01, 0.5, 2.0, 0.5, 0.3]));
        assert!(!c.holds(&[0.01, 0.5, 2.0, 0.5, 0.05]));
        assert_eq!(
            c.vars().iter().cloned().collect::<Vec<_>>(),
            ["a", "p", "q", "r", "x"]
        );
    }

    #[test]
    fn conjunctions_and_negative_literals() {
        let c = Constraint::parse("x >= -1 && x <= 2", &NAMES).unwrap();
        assert!(c.holds(&[0.0, 0.0, 1.5, 0.0, 0.0]));
        assert!(!c.holds(&[0.0, 0.0, 2.5, 0.0, 0.0]));
    }

    #[test]
    fn rejects_unknown_names_and_non_comparisons() {
        assert!(Constraint::parse("z < 1", &NAMES).is_err());
        assert!(Constraint::parse("x + 1", &NAMES).is_err());
        assert!(Constraint::parse("x <", &NAMES).is_err());
        assert!(Constraint::parse("f(x) < 1", &NAMES).is_err());
    }
}
