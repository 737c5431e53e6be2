//! Scalar expressions in declared variables.
//!
//! Grammar: numbers, declared variables, the constants `pi` and `e`, the
//! binary operators `+ - * / ^`, unary minus and the functions
//! `sin cos tan atan atan2 exp log sqrt abs sgn`.
//!
//! Evaluation is generic over [`Real`], so the same tree yields values,
//! first derivatives (`Dual<f64>`) and second derivatives
//! (`Dual<Dual<f64>>`).

mod parse;

use crate::dual::Dual;
use crate::real::Real;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("{func} takes {expected} argument(s), found {found} (offset {offset})")]
    Arity { func: String, expected: usize, found: usize, offset: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable '{0}' is not bound")]
    Unbound(String),
    #[error("expected {expected} values, got {found}")]
    BindingCount { expected: usize, found: usize },
    #[error("derivative order must be 1 or 2, got {0}")]
    Order(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    Atan2,
    Exp,
    Log,
    Sqrt,
    Abs,
    Sgn,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "atan" => Func::Atan,
            "atan2" => Func::Atan2,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sgn" => Func::Sgn,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Atan2 => "atan2",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    fn arity(&self) -> usize {
        if *self == Func::Atan2 {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Node {
    Num(f64),
    Var(usize),
    Pi,
    E,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// A parsed expression together with its declared variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
    src: String,
}

impl Expr {
    pub fn parse<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<Expr, ExprError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let root = parse::Parser::new(src, &vars)?.parse_all()?;
        Ok(Expr { root, vars, src: src.to_string() })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Source text as given to [`Expr::parse`].
    pub fn source(&self) -> &str {
        &self.src
    }

    /// Evaluate with values in declared-variable order.
    pub fn eval_with<T: Real>(&self, vals: &[T]) -> Result<T, ExprError> {
        if vals.len() != self.vars.len() {
            return Err(ExprError::BindingCount { expected: self.vars.len(), found: vals.len() });
        }
        eval_node(&self.root, vals)
    }

    pub fn eval(&self, vals: &[f64]) -> Result<f64, ExprError> {
        self.eval_with(vals)
    }

    pub fn eval_named(&self, bindings: &HashMap<String, f64>) -> Result<f64, ExprError> {
        let vals = self.bind(bindings)?;
        self.eval(&vals)
    }

    fn bind(&self, bindings: &HashMap<String, f64>) -> Result<Vec<f64>, ExprError> {
        self.vars
            .iter()
            .map(|v| bindings.get(v).copied().ok_or_else(|| ExprError::Unbound(v.clone())))
            .collect()
    }

    fn index_of(&self, var: &str) -> Result<usize, ExprError> {
        self.vars.iter().position(|v| v == var).ok_or_else(|| ExprError::Unbound(var.to_string()))
    }

    /// Partial derivative of order 1 or 2 in `var`.
    pub fn deriv(&self, var: &str, order: u8, vals: &[f64]) -> Result<f64, ExprError> {
        let k = self.index_of(var)?;
        match order {
            1 => {
                let seeded: Vec<Dual<f64>> = vals
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if i == k { Dual::variable(x) } else { Dual::constant(x) })
                    .collect();
                Ok(self.eval_with(&seeded)?.d)
            }
            2 => {
                let e = unit(vals.len(), k);
                Ok(self.jet2(vals, &e, &e)?.3)
            }
            o => Err(ExprError::Order(o)),
        }
    }

    pub fn deriv_named(
        &self,
        var: &str,
        order: u8,
        bindings: &HashMap<String, f64>,
    ) -> Result<f64, ExprError> {
        let vals = self.bind(bindings)?;
        self.deriv(var, order, &vals)
    }

    /// `(f, ∇f·a, ∇f·b, aᵀ∇²f b)` from a single nested-dual pass.
    pub fn jet2(&self, vals: &[f64], a: &[f64], b: &[f64]) -> Result<(f64, f64, f64, f64), ExprError> {
        let seeded: Vec<Dual<Dual<f64>>> = vals
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&x, (&da, &db))| Dual::new(Dual::new(x, da), Dual::new(db, 0.0)))
            .collect();
        let r = self.eval_with(&seeded)?;
        Ok((r.v.v, r.v.d, r.d.v, r.d.d))
    }

    /// Value, gradient and Hessian (row-major) at `vals`.
    pub fn hessian(&self, vals: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>), ExprError> {
        let n = vals.len();
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        let mut f = 0.0;
        if n == 0 {
            f = self.eval(vals)?;
        }
        for i in 0..n {
            for j in i..n {
                let (v, gi, gj, h) = self.jet2(vals, &unit(n, i), &unit(n, j))?;
                f = v;
                grad[i] = gi;
                grad[j] = gj;
                hess[i * n + j] = h;
                hess[j * n + i] = h;
            }
        }
        Ok((f, grad, hess))
    }
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

fn domain<T>(msg: String) -> Result<T, ExprError> {
    Err(ExprError::Domain(msg))
}

fn eval_node<T: Real>(n: &Node, vals: &[T]) -> Result<T, ExprError> {
    Ok(match n {
        Node::Num(v) => T::from_f64(*v),
        Node::Var(i) => vals[*i],
        Node::Pi => T::from_f64(std::f64::consts::PI),
        Node::E => T::from_f64(std::f64::consts::E),
        Node::Neg(a) => -eval_node(a, vals)?,
        Node::Add(a, b) => eval_node(a, vals)? + eval_node(b, vals)?,
        Node::Sub(a, b) => eval_node(a, vals)? - eval_node(b, vals)?,
        Node::Mul(a, b) => eval_node(a, vals)? * eval_node(b, vals)?,
        Node::Div(a, b) => {
            let num = eval_node(a, vals)?;
            let den = eval_node(b, vals)?;
            if den.value() == 0.0 {
                return domain("division by zero".into());
            }
            num / den
        }
        Node::Pow(a, b) => {
            let base = eval_node(a, vals)?;
            let ex = eval_node(b, vals)?;
            let ev = ex.value();
            if ex.is_constant() && ev.fract() == 0.0 && ev.abs() <= i32::MAX as f64 {
                if ev < 0.0 && base.value() == 0.0 {
                    return domain("zero raised to a negative power".into());
                }
                base.powi(ev as i32)
            } else if base.value() < 0.0 {
                return domain(format!("negative base {} with non-integer exponent", base.value()));
            } else if base.value() == 0.0 && !ex.is_constant() {
                return domain("zero base with variable exponent".into());
            } else {
                base.powf(ex)
            }
        }
        Node::Call(f, args) => {
            let x = eval_node(&args[0], vals)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Atan => x.atan(),
                Func::Atan2 => x.atan2(eval_node(&args[1], vals)?),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x.value() <= 0.0 {
                        return domain(format!("log of nonpositive value {}", x.value()));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x.value() < 0.0 {
                        return domain(format!("sqrt of negative value {}", x.value()));
                    }
                    x.sqrt()
                }
                Func::Abs => x.abs(),
                Func::Sgn => x.sgn(),
            }
        }
    })
}

fn write_node(n: &Node, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let bin = |f: &mut fmt::Formatter<'_>, a: &Node, op: &str, b: &Node| -> fmt::Result {
        write!(f, "(")?;
        write_node(a, vars, f)?;
        write!(f, " {op} ")?;
        write_node(b, vars, f)?;
        write!(f, ")")
    };
    match n {
        // `{:?}` is the shortest representation that round-trips.
        Node::Num(v) => write!(f, "{v:?}"),
        Node::Var(i) => write!(f, "{}", vars[*i]),
        Node::Pi => write!(f, "pi"),
        Node::E => write!(f, "e"),
        Node::Neg(a) => {
            write!(f, "(-")?;
            write_node(a, vars, f)?;
            write!(f, ")")
        }
        Node::Add(a, b) => bin(f, a, "+", b),
        Node::Sub(a, b) => bin(f, a, "-", b),
        Node::Mul(a, b) => bin(f, a, "*", b),
        Node::Div(a, b) => bin(f, a, "/", b),
        Node::Pow(a, b) => bin(f, a, "^", b),
        Node::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_node(a, vars, f)?;
            }
            write!(f, ")")
        }
    }
}

/// Fully parenthesized form; parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, &self.vars, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ev(s: &str) -> f64 {
        Expr::parse::<&str>(s, &[]).unwrap().eval(&[]).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("2+3*4"), 14.0);
        assert_eq!(ev("2^3^2"), 512.0);
        assert_eq!(ev("-2^2"), -4.0);
        assert_eq!(ev("2^-1"), 0.5);
        assert_eq!(ev("(1+2)*3"), 9.0);
        assert_eq!(ev("8/4/2"), 1.0);
        assert_eq!(ev("1-2-3"), -4.0);
        assert_eq!(ev("sin(pi/2)"), 1.0);
        assert_eq!(ev("1.5e1 + .5"), 15.5);
    }

    #[test]
    fn syntax_error_offset() {
        let e = Expr::parse::<&str>("2+*3", &[]).unwrap_err();
        assert!(matches!(e, ExprError::Syntax { offset: 2, .. }), "{e:?}");
        let e = Expr::parse::<&str>("(1+2", &[]).unwrap_err();
        assert!(matches!(e, ExprError::Syntax { offset: 4, .. }), "{e:?}");
        assert_eq!(Expr::parse::<&str>("  ", &[]).unwrap_err(), ExprError::Empty);
    }

    #[test]
    fn unknown_identifier_is_named() {
        let e = Expr::parse("x + zz", &["x"]).unwrap_err();
        assert_eq!(e, ExprError::UnknownIdentifier { name: "zz".into(), offset: 4 });
        let e = Expr::parse("foo(x)", &["x"]).unwrap_err();
        assert!(matches!(e, ExprError::UnknownIdentifier { ref name, .. } if name == "foo"));
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(Expr::parse("atan2(x)", &["x"]), Err(ExprError::Arity { .. })));
        assert!(matches!(Expr::parse("sin(x, x)", &["x"]), Err(ExprError::Arity { .. })));
    }

    #[test]
    fn evaluation_examples() {
        let e = Expr::parse("x*y/2", &["x", "y"]).unwrap();
        assert_eq!(e.eval(&[2.0, 3.0]).unwrap(), 3.0);
        let c = Expr::parse("1/5 - 1/5*cos(theta) + sin(theta)^2", &["theta"]).unwrap();
        assert!((c.eval(&[PI]).unwrap() - 0.4).abs() < 1e-15);
        assert!((c.deriv("theta", 1, &[FRAC_PI_2]).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        for s in ["sqrt(-1)", "log(0)", "log(-2)", "(-2)^0.5", "1/0", "0^-1"] {
            let r = Expr::parse::<&str>(s, &[]).unwrap().eval(&[]);
            assert!(matches!(r, Err(ExprError::Domain(_))), "{s}: {r:?}");
        }
        assert_eq!(ev("(-2)^3"), -8.0);
        assert_eq!(ev("sgn(0)"), 0.0);
        assert_eq!(ev("sgn(-3)"), -1.0);
    }

    #[test]
    fn derivatives() {
        let e = Expr::parse("x^2", &["x"]).unwrap();
        assert_eq!(e.deriv("x", 1, &[3.0]).unwrap(), 6.0);
        assert_eq!(e.deriv("x", 2, &[3.0]).unwrap(), 2.0);
        let s = Expr::parse("sin(theta)", &["theta"]).unwrap();
        assert_eq!(s.deriv("theta", 2, &[0.0]).unwrap(), 0.0);
        assert!(matches!(e.deriv("x", 3, &[1.0]), Err(ExprError::Order(3))));
        let m = Expr::parse("x^2*y + sin(x*y)", &["x", "y"]).unwrap();
        let (_, g, h) = m.hessian(&[0.3, 0.7]).unwrap();
        let (x, y) = (0.3f64, 0.7f64);
        assert!((g[0] - (2.0 * x * y + y * (x * y).cos())).abs() < 1e-14);
        assert!((h[1] - (2.0 * x + (x * y).cos() - x * y * (x * y).sin())).abs() < 1e-14);
        assert_eq!(h[1], h[2]);
    }

    #[test]
    fn named_bindings() {
        let e = Expr::parse("a - b", &["a", "b"]).unwrap();
        let mut m = HashMap::new();
        m.insert("a".to_string(), 5.0);
        assert_eq!(e.eval_named(&m), Err(ExprError::Unbound("b".into())));
        m.insert("b".to_string(), 2.0);
        assert_eq!(e.eval_named(&m).unwrap(), 3.0);
        assert_eq!(e.deriv_named("b", 1, &m).unwrap(), -1.0);
    }

    #[test]
    fn display_round_trip() {
        let src = "-x^2 + atan2(y, x)*1e-7 - 3.25/(1+e^y) + sgn(x)*abs(y)^1.5 - pi";
        let e = Expr::parse(src, &["x", "y"]).unwrap();
        let again = Expr::parse(&e.to_string(), &["x", "y"]).unwrap();
        assert_eq!(e.root, again.root);
    }
}
