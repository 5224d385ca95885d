//! Parameter-grid parsing: comma-separated `var=lo..hi` ranges where the
//! bounds are affine expressions in previously bound variables, e.g.
//! `q=2..3,t=1..2,k=t+1..t+4,n=2k-t+1..2k+6`.

use std::collections::BTreeMap;

use crate::counting::Params;
use crate::error::{Error, Result};

const VARS: &[char] = &['q', 'n', 'k', 't', 'x', 'j'];

/// Affine expression: sum of signed terms `c` or `c*var` (written `cvar`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    terms: Vec<(i64, Option<char>)>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::ParseError("empty expression".into()));
        }
        let mut terms = Vec::new();
        let mut chars = s.chars().peekable();
        let mut sign = 1i64;
        let mut first = true;
        while chars.peek().is_some() {
            match chars.peek() {
                Some('+') => {
                    chars.next();
                    sign = 1;
                }
                Some('-') => {
                    chars.next();
                    sign = -1;
                }
                _ if first => {}
                Some(c) => {
                    return Err(Error::ParseError(format!(
                        "expected '+' or '-' before '{c}' in '{s}'"
                    )));
                }
                None => unreachable!(),
            }
            first = false;
            let mut digits = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits.push(chars.next().unwrap());
            }
            let coef: i64 = if digits.is_empty() {
                1
            } else {
                digits
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad number in '{s}'")))?
            };
            let var = match chars.peek() {
                Some(&c) if VARS.contains(&c) => {
                    chars.next();
                    Some(c)
                }
                _ if digits.is_empty() => {
                    return Err(Error::ParseError(format!(
                        "expected number or variable in '{s}'"
                    )));
                }
                _ => None,
            };
            terms.push((sign * coef, var));
            sign = 1;
        }
        Ok(Expr { terms })
    }

    pub fn eval(&self, env: &BTreeMap<char, i64>) -> Result<i64> {
        let mut acc = 0i64;
        for &(coef, var) in &self.terms {
            let factor = match var {
                None => 1,
                Some(v) => *env
                    .get(&v)
                    .ok_or_else(|| Error::ParseError(format!("unbound variable '{v}'")))?,
            };
            acc += coef * factor;
        }
        Ok(acc)
    }
}

/// Ordered list of grid axes; later axes may reference earlier variables.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub axes: Vec<(char, Expr, Expr)>,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<GridSpec> {
        let mut axes = Vec::new();
        let mut seen = Vec::new();
        for clause in text.split(',') {
            let (var, range) = clause
                .split_once('=')
                .ok_or_else(|| Error::ParseError(format!("expected var=lo..hi, got '{clause}'")))?;
            let var = var.trim();
            let mut cs = var.chars();
            let (Some(v), None) = (cs.next(), cs.next()) else {
                return Err(Error::ParseError(format!("bad variable name '{var}'")));
            };
            if !VARS.contains(&v) {
                return Err(Error::ParseError(format!("unknown variable '{v}'")));
            }
            if seen.contains(&v) {
                return Err(Error::ParseError(format!("variable '{v}' bound twice")));
            }
            seen.push(v);
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| Error::ParseError(format!("expected lo..hi in '{clause}'")))?;
            axes.push((v, Expr::parse(lo)?, Expr::parse(hi)?));
        }
        if axes.is_empty() {
            return Err(Error::ParseError("empty grid".into()));
        }
        Ok(GridSpec { axes })
    }

    /// All tuples in nested-loop (lexicographic) order. Unbound variables
    /// default to 0 (x and j stay absent).
    pub fn tuples(&self) -> Result<Vec<Params>> {
        let mut out = Vec::new();
        let mut env = BTreeMap::new();
        self.walk(0, &mut env, &mut out)?;
        Ok(out)
    }

    fn walk(
        &self,
        depth: usize,
        env: &mut BTreeMap<char, i64>,
        out: &mut Vec<Params>,
    ) -> Result<()> {
        if depth == self.axes.len() {
            let get = |v: char| env.get(&v).copied().unwrap_or(0);
            let q = get('q');
            if !(2..=u32::MAX as i64).contains(&q) {
                return Err(Error::InvalidFieldOrder(q));
            }
            let mut p = Params::new(q as u32, get('n'), get('k'), get('t'));
            p.x = env.get(&'x').copied();
            p.j = env.get(&'j').copied();
            out.push(p);
            return Ok(());
        }
        let (var, lo, hi) = &self.axes[depth];
        let (lo, hi) = (lo.eval(env)?, hi.eval(env)?);
        for value in lo..=hi {
            env.insert(*var, value);
            self.walk(depth + 1, env, out)?;
        }
        env.remove(var);
        Ok(())
    }
}
