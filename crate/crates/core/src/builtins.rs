//! Generators for the standard examples: small quantum groups u_q(sl2),
//! Taft algebras, group algebras and the one-dimensional Hopf algebra.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::hopf::{monomial_label, power_label, GeneratorAction, HopfAlgebra, Presentation, Tables, Term, Witness};
use crate::linalg::{LinearMap, SparseVec};
use crate::maps::BialgebraMap;
use crate::scalar::{Field, FieldSpec, Scalar};

/// Generated algebras keyed by canonical name; generation and verification of
/// the larger quantum groups is expensive.
fn memo(key: String, build: impl FnOnce() -> Result<Arc<HopfAlgebra>>) -> Result<Arc<HopfAlgebra>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<HopfAlgebra>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(h) = cache.lock().expect("builtin cache").get(&key) {
        return Ok(h.clone());
    }
    let h = build()?;
    Ok(cache.lock().expect("builtin cache").entry(key).or_insert(h).clone())
}

fn cyclotomic(n: usize) -> Result<Field> {
    Field::new(FieldSpec::Cyclotomic(n as u32))
}

/// Powers `r^0 .. r^(n-1)` of an element of multiplicative order dividing n.
fn root_powers(r: &Scalar, n: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(n);
    let mut acc = r.field().one();
    for _ in 0..n {
        out.push(acc.clone());
        acc = &acc * r;
    }
    out
}

struct Uqsl2Action {
    n: usize,
    /// q^k for k mod n
    q: Vec<Scalar>,
    /// 1 / (q - q^-1)
    denom_inv: Scalar,
}

impl Uqsl2Action {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    fn qp(&self, e: i64) -> &Scalar {
        &self.q[e.rem_euclid(self.n as i64) as usize]
    }
}

impl GeneratorAction for Uqsl2Action {
    fn left_mul(&self, gen: usize, k: usize) -> SparseVec {
        let n = self.n;
        let (a, b, c) = (k / (n * n), (k / n) % n, k % n);
        let field = self.denom_inv.field();
        match gen {
            // E * E^a F^b K^c = E^(a+1) F^b K^c
            0 => {
                if a + 1 < n {
                    SparseVec::unit(self.idx(a + 1, b, c), field)
                } else {
                    SparseVec::new()
                }
            }
            // F E^a = E^a F - E^(a-1) sum_m (q^(2m) K - q^(-2m) K^-1) / (q - q^-1),
            // then K^(+-1) is moved past F^b.
            1 => {
                let mut entries = Vec::new();
                if b + 1 < n {
                    entries.push((self.idx(a, b + 1, c), field.one()));
                }
                if a > 0 {
                    let (up, down) = ((c + 1) % n, (c + n - 1) % n);
                    for m in 0..a as i64 {
                        let b = b as i64;
                        entries.push((self.idx(a - 1, b as usize, up), -&(self.qp(2 * m - 2 * b) * &self.denom_inv)));
                        entries.push((self.idx(a - 1, b as usize, down), self.qp(2 * b - 2 * m) * &self.denom_inv));
                    }
                }
                SparseVec::from_entries(entries)
            }
            // K E^a F^b = q^(2a - 2b) E^a F^b K
            2 => SparseVec::single(
                self.idx(a, b, (c + 1) % n),
                self.qp(2 * a as i64 - 2 * b as i64).clone(),
            ),
            _ => panic!("u_q(sl2) has three generators"),
        }
    }
}

/// Label of E^a F^b K^c.
pub fn uqsl2_label(a: usize, b: usize, c: usize) -> String {
    monomial_label(&[power_label("E", a), power_label("F", b), power_label("K", c)])
}

/// The small quantum group u_q(sl2) at q = z, a primitive n-th root of unity,
/// with PBW basis E^a F^b K^c (index `(a*n + b)*n + c`).
pub fn uqsl2(n: usize) -> Result<Arc<HopfAlgebra>> {
    memo(format!("uqsl2({n})"), || uqsl2_uncached(n))
}

fn uqsl2_uncached(n: usize) -> Result<Arc<HopfAlgebra>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "uqsl2 requires odd n >= 3, got {n}"
        )));
    }
    let field = cyclotomic(n)?;
    let z = field.zeta().expect("cyclotomic root");
    let q = root_powers(&z, n);
    let q_inv = &q[n - 1];
    let denom_inv = (&z - q_inv).inv()?;
    let action = Uqsl2Action {
        n,
        q: q.clone(),
        denom_inv: denom_inv.clone(),
    };
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let dim = n * n * n;
    let mut labels = Vec::with_capacity(dim);
    let mut witness = Vec::with_capacity(dim);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                labels.push(uqsl2_label(a, b, c));
                let one = field.one();
                witness.push(if a > 0 {
                    Some(Witness { gen: 0, rest: idx(a - 1, b, c), coeff: one })
                } else if b > 0 {
                    Some(Witness { gen: 1, rest: idx(0, b - 1, c), coeff: one })
                } else if c > 0 {
                    Some(Witness { gen: 2, rest: idx(0, 0, c - 1), coeff: one })
                } else {
                    None
                });
            }
        }
    }
    let (e, f, k) = (idx(1, 0, 0), idx(0, 1, 0), idx(0, 0, 1));
    let unit = idx(0, 0, 0);
    let k_inv = idx(0, 0, n - 1);
    let one = field.one();
    let t = |c: Scalar, word: Vec<usize>| Term { coeff: c, word };
    let relations = vec![
        vec![t(one.clone(), vec![2; n]), t(-&one, vec![])],
        vec![t(one.clone(), vec![0; n])],
        vec![t(one.clone(), vec![1; n])],
        vec![t(one.clone(), vec![2, 0]), t(-&q[2 % n], vec![0, 2])],
        vec![t(one.clone(), vec![2, 1]), t(-&q[n - 2], vec![1, 2])],
        vec![
            t(one.clone(), vec![0, 1]),
            t(-&one, vec![1, 0]),
            t(-&denom_inv, vec![2]),
            t(denom_inv.clone(), vec![2; n - 1]),
        ],
    ];
    let pair = |a: usize, b: usize| a * dim + b;
    let coproduct = vec![
        SparseVec::from_entries(vec![(pair(e, k), one.clone()), (pair(unit, e), one.clone())]),
        SparseVec::from_entries(vec![(pair(f, unit), one.clone()), (pair(k_inv, f), one.clone())]),
        SparseVec::unit(pair(k, k), &field),
    ];
    // S(E) = -E K^-1, S(F) = -K F = -q^-2 F K, S(K) = K^-1
    let antipode = vec![
        SparseVec::single(idx(1, 0, n - 1), -&one),
        SparseVec::single(idx(0, 1, 1), -&q[n - 2]),
        SparseVec::unit(k_inv, &field),
    ];
    let presentation = Presentation {
        generators: vec![e, f, k],
        generator_names: vec!["E".into(), "F".into(), "K".into()],
        relations,
        witness,
        coproduct,
        antipode,
        counit: vec![field.zero(), field.zero(), one.clone()],
        action: Arc::new(action),
    };
    HopfAlgebra::from_presentation_unchecked(format!("uqsl2({n})"), &field, labels, presentation)?
        .with_metadata("q", "z")
        .checked()
}

struct TaftAction {
    n: usize,
    omega: Vec<Scalar>,
}

impl GeneratorAction for TaftAction {
    fn left_mul(&self, gen: usize, k: usize) -> SparseVec {
        let n = self.n;
        let (a, c) = (k / n, k % n);
        let field = self.omega[0].field();
        match gen {
            0 if a + 1 < n => SparseVec::unit((a + 1) * n + c, field),
            0 => SparseVec::new(),
            1 => SparseVec::single(a * n + (c + 1) % n, self.omega[a].clone()),
            _ => panic!("Taft algebras have two generators"),
        }
    }
}

/// Taft algebra with K E = w E K, w = z^root, basis E^a K^c (index `a*n + c`).
/// The default `root = 2` matches the subalgebra of u_q(sl2) generated by E, K.
pub fn taft(n: usize, root: usize) -> Result<Arc<HopfAlgebra>> {
    memo(format!("taft({n}, {root})"), || taft_uncached(n, root))
}

fn taft_uncached(n: usize, root: usize) -> Result<Arc<HopfAlgebra>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("taft requires n >= 2, got {n}")));
    }
    if num_integer::gcd(root, n) != 1 {
        return Err(Error::InvalidParameter(format!(
            "root {root} must be coprime to n = {n} so that z^root is primitive"
        )));
    }
    let field = cyclotomic(n)?;
    let omega = field.zeta_pow(root as i64).expect("cyclotomic root");
    let w = root_powers(&omega, n);
    let dim = n * n;
    let idx = |a: usize, c: usize| a * n + c;
    let one = field.one();
    let mut labels = Vec::with_capacity(dim);
    let mut witness = Vec::with_capacity(dim);
    for a in 0..n {
        for c in 0..n {
            labels.push(monomial_label(&[power_label("E", a), power_label("K", c)]));
            witness.push(if a > 0 {
                Some(Witness { gen: 0, rest: idx(a - 1, c), coeff: one.clone() })
            } else if c > 0 {
                Some(Witness { gen: 1, rest: idx(0, c - 1), coeff: one.clone() })
            } else {
                None
            });
        }
    }
    let (e, k, unit) = (idx(1, 0), idx(0, 1), idx(0, 0));
    let t = |c: Scalar, word: Vec<usize>| Term { coeff: c, word };
    let relations = vec![
        vec![t(one.clone(), vec![1; n]), t(-&one, vec![])],
        vec![t(one.clone(), vec![0; n])],
        vec![t(one.clone(), vec![1, 0]), t(-&omega, vec![0, 1])],
    ];
    let pair = |a: usize, b: usize| a * dim + b;
    let presentation = Presentation {
        generators: vec![e, k],
        generator_names: vec!["E".into(), "K".into()],
        relations,
        witness,
        coproduct: vec![
            SparseVec::from_entries(vec![(pair(e, k), one.clone()), (pair(unit, e), one.clone())]),
            SparseVec::unit(pair(k, k), &field),
        ],
        antipode: vec![
            SparseVec::single(idx(1, n - 1), -&one),
            SparseVec::unit(idx(0, n - 1), &field),
        ],
        counit: vec![field.zero(), one.clone()],
        action: Arc::new(TaftAction { n, omega: w }),
    };
    let name = if root == 2 {
        format!("taft({n})")
    } else {
        format!("taft({n}, root={root})")
    };
    HopfAlgebra::from_presentation_unchecked(name, &field, labels, presentation)?
        .with_metadata("which_root", root.to_string())
        .checked()
}

/// Group algebra of a finite group given by its Cayley table
/// (`table[a][b]` is the index of `a*b`).
pub fn group_algebra(field: &Field, table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Arc<HopfAlgebra>> {
    let m = table.len();
    if m == 0 || table.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
        return Err(Error::InvalidParameter("Cayley table must be square with entries < order".into()));
    }
    let e = (0..m)
        .find(|&e| (0..m).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or_else(|| Error::InvalidParameter("Cayley table has no identity".into()))?;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::InvalidParameter(format!(
                        "Cayley table is not associative at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    let mut inverse = vec![0; m];
    for a in 0..m {
        inverse[a] = (0..m)
            .find(|&b| table[a][b] == e)
            .ok_or_else(|| Error::InvalidParameter(format!("element {a} has no inverse")))?;
    }
    let labels = labels.unwrap_or_else(|| {
        (0..m)
            .map(|i| if i == e { "1".to_string() } else { format!("g{i}") })
            .collect()
    });
    if labels.len() != m {
        return Err(Error::dim("one label per group element required"));
    }
    let one = field.one();
    let mut mult = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            mult.push((a, b, table[a][b], one.clone()));
        }
    }
    let t = Tables {
        field: field.clone(),
        labels,
        mult,
        unit: vec![(e, one.clone())],
        comult: (0..m).map(|a| (a, a, a, one.clone())).collect(),
        counit: (0..m).map(|a| (a, one.clone())).collect(),
        antipode: (0..m).map(|a| (inverse[a], a, one.clone())).collect(),
    };
    HopfAlgebra::from_tables("group_algebra", t)
}

/// Group algebra of the cyclic group of order m with labels `1, g, g^2, ...`.
pub fn cyclic(m: usize, field: &Field) -> Result<Arc<HopfAlgebra>> {
    cyclic_labelled(m, field, "g", 1, format!("cyclic({m})"))
}

fn cyclic_labelled(m: usize, field: &Field, sym: &str, step: usize, name: String) -> Result<Arc<HopfAlgebra>> {
    if m == 0 {
        return Err(Error::InvalidParameter("cyclic group order must be positive".into()));
    }
    let table: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    let labels = (0..m)
        .map(|i| monomial_label(&[power_label(sym, i * step)]))
        .collect();
    let h = group_algebra(field, &table, Some(labels))?;
    let h = Arc::try_unwrap(h).unwrap_or_else(|a| a.to_explicit().expect("explicit copy"));
    Ok(Arc::new(h.with_name(name)))
}

/// The Hopf subalgebra ⟨K^d⟩ of u_q(sl2), a cyclic group algebra of order n/d
/// over Q(z_n), labelled `1, K^d, K^2d, ...`.
pub fn k_power(n: usize, d: usize) -> Result<Arc<HopfAlgebra>> {
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidParameter(format!("d = {d} must divide n = {n}")));
    }
    memo(format!("k_power({n}, {d})"), || {
        let field = cyclotomic(n)?;
        cyclic_labelled(n / d, &field, "K", d, format!("K_power({n}, {d})"))
    })
}

/// The one-dimensional Hopf algebra k.
pub fn trivial(field: &Field) -> Result<Arc<HopfAlgebra>> {
    let one = field.one();
    let t = Tables {
        field: field.clone(),
        labels: vec!["1".into()],
        mult: vec![(0, 0, 0, one.clone())],
        unit: vec![(0, one.clone())],
        comult: vec![(0, 0, 0, one.clone())],
        counit: vec![(0, one.clone())],
        antipode: vec![(0, 0, one)],
    };
    let h = HopfAlgebra::from_tables_unchecked("k", t)?;
    h.checked()
}

/// The inclusion ⟨K^d⟩ ↪ u_q(sl2), K^{jd} ↦ K^{jd}.
pub fn subalg_k_power(n: usize, d: usize) -> Result<BialgebraMap> {
    let source = k_power(n, d)?;
    let target = uqsl2(n)?;
    let field = target.field().clone();
    let cols = (0..n / d)
        .map(|j| SparseVec::unit(j * d, &field))
        .collect();
    let m = LinearMap::new(&field, n / d, n * n * n, cols)?;
    BialgebraMap::new(format!("subalg_K_power({n}, {d})"), source, target, m)
}

/// The inclusion of the Taft algebra generated by E and K into u_q(sl2).
pub fn inclusion_taft(n: usize) -> Result<BialgebraMap> {
    let source = taft(n, 2)?;
    let target = uqsl2(n)?;
    let field = target.field().clone();
    let cols = (0..n * n)
        .map(|i| SparseVec::unit((i / n) * n * n + i % n, &field))
        .collect();
    let m = LinearMap::new(&field, n * n, n * n * n, cols)?;
    BialgebraMap::new(format!("inclusion_taft({n})"), source, target, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uqsl2_three_exhaustive_and_presented() {
        let h = uqsl2(3).unwrap();
        assert_eq!(h.dim(), 27);
        let ex = h.verify_exhaustive();
        assert!(ex.all_passed(), "{}", ex.summary());
        let pr = h.verify_presentation();
        assert!(pr.all_passed(), "{}", pr.summary());
        let k = h.parse_element("K").unwrap();
        assert!(h.check_grouplike(&k));
    }

    #[test]
    fn uqsl2_relations_hold() {
        let h = uqsl2(3).unwrap();
        let q = h.field().zeta().unwrap();
        let e = |s: &str| h.parse_element(s).unwrap();
        let ke = h.mul(&e("K"), &e("E"));
        assert_eq!(ke, h.mul(&e("E"), &e("K")).scale(&(&q * &q)));
        let comm = h.mul(&e("E"), &e("F")).sub(&h.mul(&e("F"), &e("E")));
        let kk = e("K").sub(&e("K^2"));
        assert_eq!(comm, kk.scale(&(&q - &q.inv().unwrap()).inv().unwrap()));
    }

    #[test]
    fn taft_three_passes() {
        let h = taft(3, 2).unwrap();
        assert_eq!(h.dim(), 9);
        assert!(h.verify_exhaustive().all_passed());
        assert!(taft(3, 1).unwrap().verify_exhaustive().all_passed());
        assert!(taft(3, 3).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(uqsl2(4).is_err());
        assert!(uqsl2(1).is_err());
        assert!(k_power(9, 2).is_err());
        let f = Field::rational();
        assert!(group_algebra(&f, &[vec![0, 1], vec![1, 1]], None).is_err());
    }

    #[test]
    fn group_algebras() {
        let f = Field::rational();
        let z2 = cyclic(2, &f).unwrap();
        assert_eq!(z2.labels(), &["1".to_string(), "g".to_string()]);
        let kp = k_power(9, 3).unwrap();
        assert_eq!(kp.labels(), &["1", "K^3", "K^6"]);
        assert_eq!(trivial(&f).unwrap().dim(), 1);
    }
}
