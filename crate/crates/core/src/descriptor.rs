//! Builtin descriptors such as `uqsl2(3)`, `unit_map(dual_of(taft(3)))` or
//! `regular_comodule(k_power(3, 1))`, and their resolution.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::builtins;
use crate::comodule::ComoduleAlgebra;
use crate::error::{Error, Result};
use crate::hopf::{dual, HopfAlgebra};
use crate::maps::BialgebraMap;
use crate::scalar::{Field, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Int(usize),
    Desc(Descriptor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub name: String,
    pub args: Vec<Arg>,
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Int(k) => write!(f, "{k}"),
            Arg::Desc(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            let parts: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(format!("descriptor column {}", self.pos + 1), msg)
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next().filter(|&c| pred(c)) {
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn descriptor(&mut self) -> Result<Descriptor> {
        self.skip_ws();
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.err("expected a builtin name"));
        }
        let mut args = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.arg()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
        }
        Ok(Descriptor { name, args })
    }

    fn arg(&mut self) -> Result<Arg> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                digits
                    .parse()
                    .map(Arg::Int)
                    .map_err(|_| self.err("integer out of range"))
            }
            _ => self.descriptor().map(Arg::Desc),
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let d = p.descriptor()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(d)
    }
}

/// What a descriptor resolves to.
#[derive(Clone, Debug)]
pub enum Builtin {
    Hopf(Arc<HopfAlgebra>),
    Map(Arc<BialgebraMap>),
    Comodule(Arc<ComoduleAlgebra>),
}

impl Builtin {
    pub fn kind(&self) -> &'static str {
        match self {
            Builtin::Hopf(_) => "hopf",
            Builtin::Map(_) => "map",
            Builtin::Comodule(_) => "comodule",
        }
    }
}

/// Builtin names with their parameter names, in positional order.
pub const BUILTINS: &[(&str, &[&str])] = &[
    ("uqsl2", &["n"]),
    ("taft", &["n", "root"]),
    ("group_algebra", &["group"]),
    ("cyclic", &["m"]),
    ("k_power", &["n", "d"]),
    ("trivial", &[]),
    ("dual_of", &["hopf"]),
    ("subalg_K_power", &["n", "d"]),
    ("inclusion_taft", &["n"]),
    ("unit_map", &["hopf"]),
    ("counit_map", &["hopf"]),
    ("identity_map", &["hopf"]),
    ("regular_comodule", &["hopf"]),
    ("trivial_comodule", &["hopf"]),
];

impl Descriptor {
    /// Builds a descriptor from a builtin name and `key=value` parameters.
    pub fn from_params(name: &str, params: &[(String, String)]) -> Result<Descriptor> {
        let (_, keys) = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown builtin {name:?}")))?;
        for (k, _) in params {
            if !keys.contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!("{name} has no parameter {k:?}")));
            }
        }
        let mut args = Vec::new();
        for key in keys.iter() {
            let Some((_, v)) = params.iter().find(|(k, _)| k == key) else {
                // trailing optional parameters may be omitted
                break;
            };
            args.push(match v.parse::<usize>() {
                Ok(k) => Arg::Int(k),
                Err(_) => Arg::Desc(v.parse()?),
            });
        }
        Ok(Descriptor { name: name.to_string(), args })
    }

    fn int(&self, i: usize) -> Result<usize> {
        match self.args.get(i) {
            Some(Arg::Int(k)) => Ok(*k),
            _ => Err(Error::InvalidParameter(format!("{}: argument {} must be an integer", self.name, i + 1))),
        }
    }

    fn sub(&self, i: usize) -> Result<&Descriptor> {
        match self.args.get(i) {
            Some(Arg::Desc(d)) => Ok(d),
            _ => Err(Error::InvalidParameter(format!("{}: argument {} must be a descriptor", self.name, i + 1))),
        }
    }

    fn arity(&self, min: usize, max: usize) -> Result<()> {
        let n = self.args.len();
        if n < min || n > max {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} arguments, got {n}",
                self.name,
                if min == max { min.to_string() } else { format!("{min} to {max}") }
            )));
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<Builtin> {
        let hopf = |h: Result<Arc<HopfAlgebra>>| h.map(Builtin::Hopf);
        let map = |m: Result<BialgebraMap>| m.map(|m| Builtin::Map(Arc::new(m)));
        let comodule = |c: ComoduleAlgebra| Ok(Builtin::Comodule(Arc::new(c)));
        match self.name.as_str() {
            "uqsl2" => {
                self.arity(1, 1)?;
                hopf(builtins::uqsl2(self.int(0)?))
            }
            "taft" => {
                self.arity(1, 2)?;
                let root = if self.args.len() == 2 { self.int(1)? } else { 2 };
                hopf(builtins::taft(self.int(0)?, root))
            }
            "group_algebra" => {
                self.arity(1, 1)?;
                let name = &self.sub(0)?.name;
                hopf(named_group(name).map(|h| {
                    let h = Arc::try_unwrap(h).unwrap_or_else(|a| a.to_explicit().expect("explicit copy"));
                    Arc::new(h.with_name(format!("group_algebra({name})")))
                }))
            }
            "cyclic" => {
                self.arity(1, 1)?;
                hopf(builtins::cyclic(self.int(0)?, &Field::rational()))
            }
            "k_power" => {
                self.arity(2, 2)?;
                hopf(builtins::k_power(self.int(0)?, self.int(1)?))
            }
            "trivial" => {
                self.arity(0, 0)?;
                hopf(builtins::trivial(&Field::new(FieldSpec::Rational)?))
            }
            "dual_of" => {
                self.arity(1, 1)?;
                let h = self.sub(0)?.resolve_hopf()?;
                hopf(dual(&h))
            }
            "subalg_K_power" => {
                self.arity(2, 2)?;
                map(builtins::subalg_k_power(self.int(0)?, self.int(1)?))
            }
            "inclusion_taft" => {
                self.arity(1, 1)?;
                map(builtins::inclusion_taft(self.int(0)?))
            }
            "unit_map" => {
                self.arity(1, 1)?;
                map(BialgebraMap::unit_map(&self.sub(0)?.resolve_hopf()?))
            }
            "counit_map" => {
                self.arity(1, 1)?;
                map(BialgebraMap::counit_map(&self.sub(0)?.resolve_hopf()?))
            }
            "identity_map" => {
                self.arity(1, 1)?;
                map(Ok(BialgebraMap::identity(&self.sub(0)?.resolve_hopf()?)))
            }
            "regular_comodule" => {
                self.arity(1, 1)?;
                comodule(ComoduleAlgebra::regular(&self.sub(0)?.resolve_hopf()?))
            }
            "trivial_comodule" => {
                self.arity(1, 1)?;
                comodule(ComoduleAlgebra::trivial(&self.sub(0)?.resolve_hopf()?))
            }
            other => Err(Error::InvalidParameter(format!("unknown builtin {other:?}"))),
        }
    }

    /// Descriptors of the source and target of a builtin map, where they are
    /// builtins themselves (the one-dimensional algebra over a cyclotomic field
    /// is not).
    pub fn map_endpoints(&self) -> (Option<Descriptor>, Option<Descriptor>) {
        let d = |name: &str, args: Vec<Arg>| Some(Descriptor { name: name.into(), args });
        let sub = || self.sub(0).ok().cloned();
        match self.name.as_str() {
            "subalg_K_power" => (d("k_power", self.args.clone()), d("uqsl2", self.args[..1].to_vec())),
            "inclusion_taft" => (d("taft", self.args.clone()), d("uqsl2", self.args.clone())),
            "identity_map" => (sub(), sub()),
            "unit_map" => (None, sub()),
            "counit_map" => (sub(), None),
            _ => (None, None),
        }
    }

    /// The Hopf algebra a builtin comodule algebra lives over.
    pub fn comodule_hopf(&self) -> Option<Descriptor> {
        match self.name.as_str() {
            "regular_comodule" | "trivial_comodule" => self.sub(0).ok().cloned(),
            _ => None,
        }
    }

    pub fn resolve_hopf(&self) -> Result<Arc<HopfAlgebra>> {
        match self.resolve()? {
            Builtin::Hopf(h) => Ok(h),
            b => Err(Error::InvalidParameter(format!("{self} is a {}, expected a Hopf algebra", b.kind()))),
        }
    }

    pub fn resolve_map(&self) -> Result<Arc<BialgebraMap>> {
        match self.resolve()? {
            Builtin::Map(m) => Ok(m),
            b => Err(Error::InvalidParameter(format!("{self} is a {}, expected a map", b.kind()))),
        }
    }

    pub fn resolve_comodule(&self) -> Result<Arc<ComoduleAlgebra>> {
        match self.resolve()? {
            Builtin::Comodule(c) => Ok(c),
            // a Hopf algebra stands for its regular comodule algebra
            Builtin::Hopf(h) => Ok(Arc::new(ComoduleAlgebra::regular(&h))),
            b => Err(Error::InvalidParameter(format!("{self} is a {}, expected a comodule algebra", b.kind()))),
        }
    }
}

/// Group algebras over Q of `Zn`, products such as `Z2xZ3`, and `S3`.
fn named_group(name: &str) -> Result<Arc<HopfAlgebra>> {
    let q = Field::rational();
    if name == "S3" {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let labels = ["1", "s1", "s2", "s1s2s1", "s1s2", "s2s1"].map(String::from).to_vec();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab = [a[b[0]], a[b[1]], a[b[2]]];
                        perms.iter().position(|p| *p == ab).expect("closed")
                    })
                    .collect()
            })
            .collect();
        return builtins::group_algebra(&q, &table, Some(labels));
    }
    let orders: Vec<usize> = name
        .split('x')
        .map(|f| f.strip_prefix('Z').and_then(|k| k.parse().ok()).filter(|&k: &usize| k > 0))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidParameter(format!("unknown group {name:?}; use Zn, ZnxZm or S3")))?;
    if let [m] = orders[..] {
        return builtins::cyclic(m, &q);
    }
    let order: usize = orders.iter().product();
    let digits = |mut i: usize| {
        let mut out = vec![0; orders.len()];
        for (k, m) in orders.iter().enumerate().rev() {
            out[k] = i % m;
            i /= m;
        }
        out
    };
    let index = |d: &[usize]| d.iter().zip(&orders).fold(0, |acc, (x, m)| acc * m + x);
    let table: Vec<Vec<usize>> = (0..order)
        .map(|a| {
            (0..order)
                .map(|b| {
                    let (da, db) = (digits(a), digits(b));
                    let sum: Vec<usize> = da.iter().zip(&db).zip(&orders).map(|((x, y), m)| (x + y) % m).collect();
                    index(&sum)
                })
                .collect()
        })
        .collect();
    let labels = (0..order)
        .map(|i| {
            let parts: Vec<String> = digits(i)
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| crate::hopf::power_label(&format!("g{}", k + 1), e))
                .collect();
            crate::hopf::monomial_label(&parts)
        })
        .collect();
    builtins::group_algebra(&q, &table, Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let d: Descriptor = " unit_map( dual_of(uqsl2(3)) )".parse().unwrap();
        assert_eq!(d.to_string(), "unit_map(dual_of(uqsl2(3)))");
        let d: Descriptor = "taft(3,2)".parse().unwrap();
        assert_eq!(d.args, vec![Arg::Int(3), Arg::Int(2)]);
        assert!("taft(3".parse::<Descriptor>().is_err());
        assert!("taft(3))".parse::<Descriptor>().is_err());
        assert!("3".parse::<Descriptor>().is_err());
    }

    #[test]
    fn params() {
        let p = vec![("n".to_string(), "3".to_string())];
        assert_eq!(Descriptor::from_params("uqsl2", &p).unwrap().to_string(), "uqsl2(3)");
        let p = vec![("hopf".to_string(), "taft(3)".to_string())];
        assert_eq!(Descriptor::from_params("unit_map", &p).unwrap().to_string(), "unit_map(taft(3))");
        assert!(Descriptor::from_params("uqsl2", &[("m".into(), "3".into())]).is_err());
    }

    #[test]
    fn groups() {
        let h: Descriptor = "group_algebra(Z2xZ2)".parse().unwrap();
        let h = h.resolve_hopf().unwrap();
        assert_eq!(h.dim(), 4);
        assert!(h.verify_axioms().all_passed());
        let s3 = "group_algebra(S3)".parse::<Descriptor>().unwrap().resolve_hopf().unwrap();
        assert!(s3.verify_axioms().all_passed());
        assert!("group_algebra(Q8)".parse::<Descriptor>().unwrap().resolve().is_err());
    }

    #[test]
    fn kinds() {
        let m = "subalg_K_power(3, 1)".parse::<Descriptor>().unwrap();
        assert!(matches!(m.resolve().unwrap(), Builtin::Map(_)));
        assert!(m.resolve_hopf().is_err());
        let c = "regular_comodule(k_power(3, 1))".parse::<Descriptor>().unwrap();
        assert_eq!(c.resolve_comodule().unwrap().dim(), 3);
    }
}
