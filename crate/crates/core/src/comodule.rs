//! Left comodule algebras (L, δ) over a Hopf algebra, pushforward of the
//! coaction along a bialgebra map, and the f-Frobenius element solver.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{format_vector, parse_vector, HopfAlgebra};
use crate::invariants::invariants;
use crate::linalg::{canonical_basis, LinearMap, Matrix, SparseVec};
use crate::maps::{g_in_image, relative_modular_function, BialgebraMap};
use crate::report::{Check, Report};
use crate::scalar::{Field, Scalar};

/// An algebra L with a left H-coaction δ(e_i) = Σ c h_j ⊗ e_k, stored at
/// index `j * dim L + k`.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra {
    hopf: Arc<HopfAlgebra>,
    labels: Vec<String>,
    mult: Vec<SparseVec>,
    unit: SparseVec,
    coaction: Vec<SparseVec>,
    pub exact_asserted: bool,
    pub indecomposable_asserted: bool,
}

impl ComoduleAlgebra {
    pub fn new_unchecked(
        hopf: Arc<HopfAlgebra>,
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: SparseVec,
        coaction: Vec<SparseVec>,
    ) -> Result<Self> {
        let d = labels.len();
        let n = hopf.dim();
        if d == 0 || mult.len() != d * d || coaction.len() != d {
            return Err(Error::dim(format!(
                "comodule algebra of dimension {d} needs {} products and {d} coactions",
                d * d
            )));
        }
        let bad = mult.iter().chain(std::iter::once(&unit)).any(|v| v.max_index().is_some_and(|m| m >= d))
            || coaction.iter().any(|v| v.max_index().is_some_and(|m| m >= n * d));
        if bad {
            return Err(Error::dim("structure constant index out of range"));
        }
        Ok(ComoduleAlgebra {
            hopf,
            labels,
            mult,
            unit,
            coaction,
            exact_asserted: false,
            indecomposable_asserted: false,
        })
    }

    pub fn new(
        hopf: Arc<HopfAlgebra>,
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: SparseVec,
        coaction: Vec<SparseVec>,
    ) -> Result<Self> {
        let l = ComoduleAlgebra::new_unchecked(hopf, labels, mult, unit, coaction)?;
        l.verify().into_result()?;
        Ok(l)
    }

    /// H coacting on itself by Δ.
    pub fn regular(h: &Arc<HopfAlgebra>) -> Self {
        let n = h.dim();
        let mult = (0..n * n).map(|ij| h.mul_basis(ij / n, ij % n).clone()).collect();
        let coaction = (0..n).map(|i| h.comul_basis(i).clone()).collect();
        ComoduleAlgebra {
            hopf: h.clone(),
            labels: h.labels().to_vec(),
            mult,
            unit: h.unit().clone(),
            coaction,
            exact_asserted: true,
            indecomposable_asserted: true,
        }
    }

    /// The base field with δ(1) = 1 ⊗ 1.
    pub fn trivial(h: &Arc<HopfAlgebra>) -> Self {
        let f = h.field();
        ComoduleAlgebra {
            hopf: h.clone(),
            labels: vec!["1".into()],
            mult: vec![SparseVec::unit(0, f)],
            unit: SparseVec::unit(0, f),
            coaction: vec![h.unit().clone()],
            exact_asserted: true,
            indecomposable_asserted: true,
        }
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn field(&self) -> &Field {
        self.hopf.field()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn coaction_basis(&self, i: usize) -> &SparseVec {
        &self.coaction[i]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut all = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                for (k, c) in self.mul_basis(i, j).iter() {
                    all.push((k, c * &ab));
                }
            }
        }
        SparseVec::from_entries(all)
    }

    pub fn coact(&self, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(i, c)| (c, &self.coaction[i])))
    }

    /// Product in H ⊗ L.
    pub fn mul_hl(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let d = self.dim();
        let h = &self.hopf;
        let mut all = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                let p = h.mul_basis(i / d, j / d);
                let q = self.mul_basis(i % d, j % d);
                for (k1, c1) in p.iter() {
                    let c1 = c1 * &ab;
                    for (k2, c2) in q.iter() {
                        all.push((k1 * d + k2, &c1 * c2));
                    }
                }
            }
        }
        SparseVec::from_entries(all)
    }

    /// Matrix of left multiplication by x.
    pub fn left_mul_map(&self, x: &SparseVec) -> LinearMap {
        let d = self.dim();
        LinearMap::from_fn(self.field(), d, d, |j| self.mul(x, &SparseVec::unit(j, self.field())))
    }

    pub fn right_mul_map(&self, x: &SparseVec) -> LinearMap {
        let d = self.dim();
        LinearMap::from_fn(self.field(), d, d, |j| self.mul(&SparseVec::unit(j, self.field()), x))
    }

    pub fn format_element(&self, v: &SparseVec) -> String {
        format_vector(v, &self.labels)
    }

    pub fn parse_element(&self, s: &str) -> Result<SparseVec> {
        parse_vector(s, &self.labels, self.field(), &self.unit)
    }

    /// True when L is H itself with δ = Δ.
    pub fn is_regular(&self) -> bool {
        let h = &self.hopf;
        let n = h.dim();
        self.dim() == n
            && self.unit == *h.unit()
            && (0..n).all(|i| self.coaction[i] == *h.comul_basis(i))
            && (0..n * n).all(|ij| self.mult[ij] == *h.mul_basis(ij / n, ij % n))
    }

    pub fn verify(&self) -> Report {
        let d = self.dim();
        let h = &self.hopf;
        let n = h.dim();
        let f = self.field();
        let lab = |i: usize| self.labels[i].as_str();
        let mut r = Report::new("comodule algebra");
        let pairs = || (0..d).flat_map(move |i| (0..d).map(move |j| (i, j)));
        let assoc = pairs().find_map(|(i, j)| {
            (0..d).find_map(|k| {
                let left = self.mul(self.mul_basis(i, j), &SparseVec::unit(k, f));
                let right = self.mul(&SparseVec::unit(i, f), self.mul_basis(j, k));
                (left != right).then(|| format!("({} {}) {}", lab(i), lab(j), lab(k)))
            })
        });
        r.push(Check::from_witness("associativity", assoc));
        let unit = (0..d).find_map(|i| {
            let e = SparseVec::unit(i, f);
            (self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e).then(|| lab(i).to_string())
        });
        r.push(Check::from_witness("unit", unit));
        let coassoc = (0..d).find_map(|i| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (jk, c) in self.coaction[i].iter() {
                let (j, k) = (jk / d, jk % d);
                for (ab, x) in h.comul_basis(j).iter() {
                    left.push((ab * d + k, c * x));
                }
                for (bk, x) in self.coaction[k].iter() {
                    right.push((j * n * d + bk, c * x));
                }
            }
            (SparseVec::from_entries(left) != SparseVec::from_entries(right)).then(|| lab(i).to_string())
        });
        r.push(Check::from_witness("coassociativity", coassoc));
        let counit = (0..d).find_map(|i| {
            let v = SparseVec::from_entries(
                self.coaction[i]
                    .iter()
                    .map(|(jk, c)| (jk % d, c * &h.counit()[jk / d]))
                    .collect(),
            );
            (v != SparseVec::unit(i, f)).then(|| lab(i).to_string())
        });
        r.push(Check::from_witness("counit", counit));
        let mult = pairs().find_map(|(i, j)| {
            let left = self.coact(self.mul_basis(i, j));
            let right = self.mul_hl(&self.coaction[i], &self.coaction[j]);
            (left != right).then(|| format!("δ({} {})", lab(i), lab(j)))
        });
        r.push(Check::from_witness("coaction_multiplicative", mult));
        let one = crate::linalg::tensor_vec(h.unit(), &self.unit, d);
        r.push(Check::from_witness(
            "coaction_unital",
            (self.coact(&self.unit) != one).then(|| "δ(1) != 1 ⊗ 1".to_string()),
        ));
        r
    }

    /// (L, (f ⊗ id)∘δ) as a comodule algebra over the target of f.
    pub fn pushforward(&self, f: &BialgebraMap) -> Result<ComoduleAlgebra> {
        if f.source().fingerprint() != self.hopf.fingerprint() {
            return Err(Error::InvalidParameter(format!(
                "coaction is over {}, map starts at {}",
                self.hopf.name(),
                f.source().name()
            )));
        }
        let coaction = (0..self.dim()).map(|i| self.push_coaction(f, &self.coaction[i])).collect();
        let mut out = ComoduleAlgebra::new_unchecked(
            f.target().clone(),
            self.labels.clone(),
            self.mult.clone(),
            self.unit.clone(),
            coaction,
        )?;
        out.exact_asserted = self.exact_asserted;
        out.indecomposable_asserted = self.indecomposable_asserted;
        out.verify().into_result()?;
        Ok(out)
    }

    fn push_coaction(&self, f: &BialgebraMap, t: &SparseVec) -> SparseVec {
        let d = self.dim();
        let mut all = Vec::new();
        for (jk, c) in t.iter() {
            for (a, x) in f.matrix().cols[jk / d].iter() {
                all.push((a * d + jk % d, c * x));
            }
        }
        SparseVec::from_entries(all)
    }
}

/// Options for the invertible-representative search.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    pub attempts: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, attempts: 64 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusElement {
    pub exists: bool,
    #[serde(skip)]
    pub element: Option<SparseVec>,
    pub element_label: Option<String>,
    pub kernel_dim: usize,
    pub prefilter_g_in_image: Option<bool>,
    pub exact_asserted: bool,
    pub warnings: Vec<String>,
}

/// Searches for an invertible a ∈ L with a l a⁻¹ = χ_f(l_{-1}) l_0 for all l
/// and f(a_{-1}) ⊗ a_0 = f(g_{H′}) ḡ_H ⊗ a. L is a comodule algebra over the
/// source of f.
pub fn f_frobenius_element(f: &BialgebraMap, l: &ComoduleAlgebra, opts: SearchOptions) -> Result<FrobeniusElement> {
    if f.source().fingerprint() != l.hopf().fingerprint() {
        return Err(Error::InvalidParameter("L must be a comodule algebra over the source of f".into()));
    }
    let (hs, ht) = (f.source(), f.target());
    let field = hs.field().clone();
    let d = l.dim();
    let chi = relative_modular_function(f)?;
    let bs = invariants(hs)?;
    let bt = invariants(ht)?;
    let u = ht.mul(&f.apply(&bs.g), &bt.g_bar);
    let prefilter = if l.is_regular() { Some(g_in_image(f)?) } else { None };

    // χ_f(l_{-1}) l_0 for each basis l
    let twisted: Vec<SparseVec> = (0..d)
        .map(|k| {
            SparseVec::from_entries(
                l.coaction_basis(k)
                    .iter()
                    .map(|(jk, c)| (jk % d, c * &chi[jk / d]))
                    .collect(),
            )
        })
        .collect();
    let block = d * d;
    let cols: Vec<SparseVec> = (0..d)
        .map(|i| {
            let ei = SparseVec::unit(i, &field);
            let mut entries = Vec::new();
            for (k, tk) in twisted.iter().enumerate() {
                let v = l.mul_basis(i, k).sub(&l.mul(tk, &ei));
                entries.extend(v.iter().map(|(r, c)| (k * d + r, c.clone())));
            }
            let pushed = l.push_coaction(f, l.coaction_basis(i));
            let v = pushed.sub(&crate::linalg::tensor_vec(&u, &ei, d));
            entries.extend(v.iter().map(|(r, c)| (block + r, c.clone())));
            SparseVec::from_entries(entries)
        })
        .collect();
    let system = Matrix::from_columns(&field, block + ht.dim() * d, &cols)?;
    let kernel = canonical_basis(&field, d, system.kernel());
    let mut warnings = Vec::new();
    let invertible = |a: &SparseVec| l.left_mul_map(a).rank() == d;
    let mut found = kernel.iter().find(|v| invertible(v)).cloned();
    if found.is_none() && kernel.len() > 1 {
        let one = field.one();
        let sum = SparseVec::linear_combination(kernel.iter().map(|v| (&one, v)));
        if invertible(&sum) {
            found = Some(sum);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.attempts {
                let coeffs: Vec<Scalar> = kernel.iter().map(|_| field.from_int(rng.gen_range(-3..=3))).collect();
                let v = SparseVec::linear_combination(coeffs.iter().zip(&kernel));
                if !v.is_zero() && invertible(&v) {
                    found = Some(v);
                    break;
                }
            }
        }
    }
    let found = found.map(|v| v.normalized());
    if let Some(a) = &found {
        verify_frobenius_element(f, l, a, &chi, &u)?;
        if kernel.len() > 1 {
            warnings.push(format!(
                "solution space has dimension {} (expected 1)",
                kernel.len()
            ));
        }
    } else if kernel.is_empty() {
        warnings.push("kernel is zero".into());
    } else {
        warnings.push(format!(
            "kernel has dimension {} but no invertible element was found in {} attempts",
            kernel.len(),
            opts.attempts
        ));
    }
    if prefilter == Some(false) && found.is_some() {
        return Err(Error::Inconsistent(
            "f-Frobenius element found although g_H is not in the image of f".into(),
        ));
    }
    Ok(FrobeniusElement {
        exists: found.is_some(),
        element_label: found.as_ref().map(|a| l.format_element(a)),
        element: found,
        kernel_dim: kernel.len(),
        prefilter_g_in_image: prefilter,
        exact_asserted: l.exact_asserted,
        warnings,
    })
}

/// Re-checks both defining equations for `a` directly, using a⁻¹.
fn verify_frobenius_element(
    f: &BialgebraMap,
    l: &ComoduleAlgebra,
    a: &SparseVec,
    chi: &[Scalar],
    u: &SparseVec,
) -> Result<()> {
    let d = l.dim();
    let field = l.field();
    let inv = l
        .left_mul_map(a)
        .invert()
        .map_err(|_| Error::Inconsistent("f-Frobenius candidate is not invertible".into()))?;
    let a_inv = inv.apply(l.unit());
    for k in 0..d {
        let ek = SparseVec::unit(k, field);
        let conj = l.mul(&l.mul(a, &ek), &a_inv);
        let expect = SparseVec::from_entries(
            l.coaction_basis(k)
                .iter()
                .map(|(jk, c)| (jk % d, c * &chi[jk / d]))
                .collect(),
        );
        if conj != expect {
            return Err(Error::Inconsistent(format!("a l a^-1 check fails at {}", l.labels()[k])));
        }
    }
    let left = l.push_coaction(f, &l.coact(a));
    if left != crate::linalg::tensor_vec(u, a, d) {
        return Err(Error::Inconsistent("coaction condition fails for a".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn regular_and_trivial_verify() {
        let h = builtins::taft(3, 2).unwrap();
        assert!(ComoduleAlgebra::regular(&h).verify().all_passed());
        assert!(ComoduleAlgebra::trivial(&h).verify().all_passed());
        assert!(ComoduleAlgebra::regular(&h).is_regular());
    }

    #[test]
    fn zero_coaction_fails_counit() {
        let h = builtins::cyclic(2, &Field::rational()).unwrap();
        let l = ComoduleAlgebra::new_unchecked(
            h.clone(),
            vec!["1".into()],
            vec![SparseVec::unit(0, h.field())],
            SparseVec::unit(0, h.field()),
            vec![SparseVec::new()],
        )
        .unwrap();
        let r = l.verify();
        assert!(!r.get("counit").unwrap().passed);
    }

    #[test]
    fn k_in_uqsl2_3() {
        let f = builtins::subalg_k_power(3, 1).unwrap();
        let l = ComoduleAlgebra::regular(f.source());
        let pushed = l.pushforward(&f).unwrap();
        assert_eq!(pushed.hopf().dim(), 27);
        let r = f_frobenius_element(&f, &l, SearchOptions::default()).unwrap();
        assert!(r.exists);
        assert_eq!(r.element_label.as_deref(), Some("K"));
        assert_eq!(r.kernel_dim, 1);
        assert_eq!(r.prefilter_g_in_image, Some(true));
    }

    #[test]
    fn tensor_frobenius_gives_unit() {
        let h = builtins::cyclic(3, &Field::rational()).unwrap();
        let id = BialgebraMap::identity(&h);
        let l = ComoduleAlgebra::regular(&h);
        let r = f_frobenius_element(&id, &l, SearchOptions::default()).unwrap();
        assert_eq!(r.element, Some(h.unit().clone()));
    }
}
