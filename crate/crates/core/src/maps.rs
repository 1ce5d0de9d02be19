//! Bialgebra maps f: H′ → H, the relative modular function χ_f, and the
//! perfect / Frobenius / ⊗-Frobenius classification.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{HopfAlgebra, EXHAUSTIVE_LIMIT};
use crate::invariants::{convolution, invariants};
use crate::linalg::{tensor_vec, EchelonBuilder, LinearMap, Matrix, Solution, SparseVec};
use crate::module::{character_witness, ModuleRep};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

/// A linear map between Hopf algebras preserving all bialgebra structure.
#[derive(Clone)]
pub struct BialgebraMap {
    name: String,
    source: Arc<HopfAlgebra>,
    target: Arc<HopfAlgebra>,
    matrix: LinearMap,
}

impl fmt::Debug for BialgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BialgebraMap({}: {} -> {})", self.name, self.source.name(), self.target.name())
    }
}

fn sources_basis(h: &HopfAlgebra) -> Vec<usize> {
    match h.presentation() {
        Some(p) if h.dim() > EXHAUSTIVE_LIMIT => p.generators.clone(),
        _ => (0..h.dim()).collect(),
    }
}

impl BialgebraMap {
    pub fn new_unchecked(
        name: impl Into<String>,
        source: Arc<HopfAlgebra>,
        target: Arc<HopfAlgebra>,
        matrix: LinearMap,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch {
                left: source.field().to_string(),
                right: target.field().to_string(),
            });
        }
        if matrix.dom != source.dim() || matrix.cod != target.dim() {
            return Err(Error::dim(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.cod,
                matrix.dom,
                target.dim(),
                source.dim()
            )));
        }
        Ok(BialgebraMap {
            name: name.into(),
            source,
            target,
            matrix,
        })
    }

    /// Builds and verifies the bialgebra-map identities.
    pub fn new(
        name: impl Into<String>,
        source: Arc<HopfAlgebra>,
        target: Arc<HopfAlgebra>,
        matrix: LinearMap,
    ) -> Result<Self> {
        let f = BialgebraMap::new_unchecked(name, source, target, matrix)?;
        f.verify().into_result()?;
        Ok(f)
    }

    pub fn identity(h: &Arc<HopfAlgebra>) -> Self {
        BialgebraMap {
            name: format!("identity({})", h.name()),
            source: h.clone(),
            target: h.clone(),
            matrix: LinearMap::identity(h.field(), h.dim()),
        }
    }

    /// u: k → H.
    pub fn unit_map(h: &Arc<HopfAlgebra>) -> Result<Self> {
        let k = crate::builtins::trivial(h.field())?;
        let m = LinearMap::new(h.field(), 1, h.dim(), vec![h.unit().clone()])?;
        BialgebraMap::new(format!("unit_map({})", h.name()), k, h.clone(), m)
    }

    /// ε: H → k.
    pub fn counit_map(h: &Arc<HopfAlgebra>) -> Result<Self> {
        let k = crate::builtins::trivial(h.field())?;
        let cols = h.counit().iter().map(|c| SparseVec::single(0, c.clone())).collect();
        let m = LinearMap::new(h.field(), h.dim(), 1, cols)?;
        BialgebraMap::new(format!("counit_map({})", h.name()), h.clone(), k, m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<HopfAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HopfAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &LinearMap {
        &self.matrix
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(v)
    }

    /// (f ⊗ f) on H′ ⊗ H′.
    pub fn apply2(&self, t: &SparseVec) -> SparseVec {
        let (n1, n) = (self.source.dim(), self.target.dim());
        let mut acc = SparseVec::new();
        for (ij, c) in t.iter() {
            let v = tensor_vec(&self.matrix.cols[ij / n1], &self.matrix.cols[ij % n1], n);
            acc = acc.add_scaled(&v, c);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    /// self ∘ other
    pub fn compose(&self, other: &BialgebraMap) -> Result<BialgebraMap> {
        if other.target.fingerprint() != self.source.fingerprint() {
            return Err(Error::InvalidParameter("maps are not composable".into()));
        }
        Ok(BialgebraMap {
            name: format!("{} ∘ {}", self.name, other.name),
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.compose(&other.matrix)?,
        })
    }

    /// Multiplicativity, unit, comultiplicativity, counit, and f∘S′ = S∘f.
    pub fn verify(&self) -> Report {
        let (hs, ht) = (&self.source, &self.target);
        let mut r = Report::new(format!("bialgebra map {}", self.name));
        let lab = |i: usize| hs.label(i).to_string();
        let mult = match hs.presentation() {
            Some(p) if hs.dim() > EXHAUSTIVE_LIMIT => p
                .relations
                .iter()
                .enumerate()
                .find_map(|(ri, rel)| {
                    let mut total = SparseVec::new();
                    for t in rel {
                        let mut v = ht.unit().clone();
                        for &g in t.word.iter().rev() {
                            v = ht.mul(&self.matrix.cols[p.generators[g]], &v);
                        }
                        total = total.add_scaled(&v, &t.coeff);
                    }
                    (!total.is_zero()).then(|| format!("relation {ri}"))
                })
                .or_else(|| {
                    (0..hs.dim()).find_map(|i| {
                        let w = p.witness[i].as_ref()?;
                        let expect = ht
                            .mul(&self.matrix.cols[p.generators[w.gen]], &self.matrix.cols[w.rest])
                            .scale(&w.coeff);
                        (expect != self.matrix.cols[i]).then(|| lab(i))
                    })
                }),
            _ => (0..hs.dim())
                .flat_map(|i| (0..hs.dim()).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    self.apply(hs.mul_basis(i, j)) != ht.mul(&self.matrix.cols[i], &self.matrix.cols[j])
                })
                .map(|(i, j)| format!("f({} * {})", lab(i), lab(j))),
        };
        r.push(Check::from_witness("multiplicative", mult));
        r.push(Check::from_witness(
            "unital",
            (self.apply(hs.unit()) != *ht.unit()).then(|| "f(1) != 1".to_string()),
        ));
        let test = sources_basis(hs);
        let comult = test.iter().find_map(|&i| {
            (self.apply2(hs.comul_basis(i)) != ht.comul(&self.matrix.cols[i])).then(|| lab(i))
        });
        r.push(Check::from_witness("comultiplicative", comult));
        let counit = (0..hs.dim()).find_map(|i| {
            (ht.counit_of(&self.matrix.cols[i]) != hs.counit()[i]).then(|| lab(i))
        });
        r.push(Check::from_witness("counital", counit));
        let anti = test.iter().find_map(|&i| {
            (self.apply(hs.antipode_basis(i)) != ht.antipode(&self.matrix.cols[i])).then(|| lab(i))
        });
        r.push(Check::from_witness("antipode_compatible", anti));
        r
    }

    /// H_f: the regular H-module seen as an H′-module along f.
    pub fn twisted_regular(&self) -> Result<ModuleRep> {
        ModuleRep::regular(&self.target).twisted_by(&self.source, &self.matrix)
    }

    /// Pulls back an H-module along f.
    pub fn twist(&self, m: &ModuleRep) -> Result<ModuleRep> {
        m.twisted_by(&self.source, &self.matrix)
    }
}

/// χ_f(h′) = ⟨α_H, S_H(f(h′_1))⟩ ⟨α_{H′}, h′_2⟩, cross-checked against the
/// convolution (ᾱ_H ∘ f) ⋆ α_{H′}.
pub fn relative_modular_function(f: &BialgebraMap) -> Result<Vec<Scalar>> {
    let (hs, ht) = (f.source(), f.target());
    let bs = invariants(hs)?;
    let bt = invariants(ht)?;
    let n1 = hs.dim();
    let field = hs.field();
    let chi: Vec<Scalar> = (0..n1)
        .map(|i| {
            let mut acc = field.zero();
            for (ab, c) in hs.comul_basis(i).iter() {
                let (a, b) = (ab / n1, ab % n1);
                if bs.alpha[b].is_zero() {
                    continue;
                }
                let s_fa = ht.antipode(&f.matrix.cols[a]);
                let v = s_fa.dot_dense(&bt.alpha, field);
                acc = &acc + &(&(c * &v) * &bs.alpha[b]);
            }
            acc
        })
        .collect();
    let abar_f: Vec<Scalar> = f
        .matrix
        .cols
        .iter()
        .map(|c| c.dot_dense(&bt.alpha_bar, field))
        .collect();
    if let Some(w) = character_witness(hs, &chi) {
        return Err(Error::Inconsistent(format!("χ_f is not a character: {w}")));
    }
    let check = convolution(hs, &abar_f, &bs.alpha);
    if check != chi {
        return Err(Error::Inconsistent(
            "χ_f disagrees with (ᾱ_H ∘ f) ⋆ α_H′".into(),
        ));
    }
    Ok(chi)
}

/// How perfectness was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Perfectness {
    Perfect,
    NotPerfect,
    /// The caller asserted perfectness; nothing was checked.
    Asserted,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerfectMode {
    /// Injective maps are perfect by freeness; otherwise run the split test.
    Auto,
    Split,
    Assert,
    Skip,
}

impl std::str::FromStr for PerfectMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(PerfectMode::Auto),
            "split" | "split_test" => Ok(PerfectMode::Split),
            "assert" | "assert_injective" => Ok(PerfectMode::Assert),
            "skip" => Ok(PerfectMode::Skip),
            _ => Err(Error::parse("perfect mode", format!("unknown mode {s:?}"))),
        }
    }
}

pub fn is_perfect(f: &BialgebraMap, mode: PerfectMode) -> Result<Perfectness> {
    let split = || -> Result<Perfectness> {
        Ok(if projective_test(&f.twisted_regular()?) {
            Perfectness::Perfect
        } else {
            Perfectness::NotPerfect
        })
    };
    match mode {
        PerfectMode::Auto if f.is_injective() => Ok(Perfectness::Perfect),
        PerfectMode::Auto | PerfectMode::Split => split(),
        PerfectMode::Assert => Ok(Perfectness::Asserted),
        PerfectMode::Skip => Ok(Perfectness::Skipped),
    }
}

/// Decides whether M is projective: does the free cover A^{dim M} → M,
/// e_i^(k) ↦ a_i·m_k, admit an A-linear section?
pub fn projective_test(m: &ModuleRep) -> bool {
    let a = m.hopf();
    let (n, d) = (a.dim(), m.dim());
    let field = a.field();
    let width = d * n;
    let var = |j: usize, k: usize, t: usize| j * width + k * n + t;
    let nvars = d * width;
    // commuting with generators is enough for A-linearity
    let tests: Vec<usize> = match a.presentation() {
        Some(p) => p.generators.clone(),
        None => (0..n).collect(),
    };
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut rhs: Vec<(usize, Scalar)> = Vec::new();
    for &i in &tests {
        for j in 0..d {
            // s(a_i m_j) - a_i s(m_j) = 0, one equation per coordinate (k, t)
            let mut eqs: HashMap<(usize, usize), Vec<(usize, Scalar)>> = HashMap::new();
            for (l, c) in m.action()[i].cols[j].iter() {
                for k in 0..d {
                    for t in 0..n {
                        eqs.entry((k, t)).or_default().push((var(l, k, t), c.clone()));
                    }
                }
            }
            for ip in 0..n {
                for (t, c) in a.mul_basis(i, ip).iter() {
                    for k in 0..d {
                        eqs.entry((k, t)).or_default().push((var(j, k, ip), -c));
                    }
                }
            }
            let mut keys: Vec<(usize, usize)> = eqs.keys().copied().collect();
            keys.sort_unstable();
            for key in keys {
                let r = SparseVec::from_entries(eqs.remove(&key).expect("key"));
                if !r.is_zero() {
                    rows.push(r);
                }
            }
        }
    }
    // π(s(m_j)) = m_j
    for j in 0..d {
        let mut eqs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d];
        for k in 0..d {
            for t in 0..n {
                for (l, c) in m.action()[t].cols[k].iter() {
                    eqs[l].push((var(j, k, t), c.clone()));
                }
            }
        }
        for (l, e) in eqs.into_iter().enumerate() {
            if l == j {
                rhs.push((rows.len(), field.one()));
            }
            rows.push(SparseVec::from_entries(e));
        }
    }
    let mat = Matrix::from_rows(field, nvars, rows).expect("indices in range");
    matches!(
        mat.solve(&SparseVec::from_entries(rhs)).expect("rhs fits"),
        Solution::Consistent { .. }
    )
}

/// Is g_H in the image of f?
pub fn g_in_image(f: &BialgebraMap) -> Result<bool> {
    let bt = invariants(f.target())?;
    let mut b = EchelonBuilder::new(f.target().field(), f.target().dim());
    for c in &f.matrix.cols {
        b.push(c.clone());
    }
    Ok(b.contains(&bt.g))
}

/// The H′-module map σ_X: k_χ ⊗ X_f → X_f ⊗ k_χ, x ↦ g_H f(ḡ_{H′}) x,
/// verified to be H′-linear.
pub fn half_braiding(f: &BialgebraMap, x: &ModuleRep) -> Result<LinearMap> {
    let chi = relative_modular_function(f)?;
    let bs = invariants(f.source())?;
    let bt = invariants(f.target())?;
    let u = f.target().mul(&bt.g, &f.apply(&bs.g_bar));
    let sigma = x.operator(&u);
    let xf = f.twist(x)?;
    let k_chi = ModuleRep::one_dim(f.source(), &chi)?;
    let source = k_chi.tensor(&xf)?;
    let target = xf.tensor(&k_chi)?;
    if let Some(w) = source.module_map_witness(&target, &sigma) {
        return Err(Error::Inconsistent(format!(
            "half-braiding is not H′-linear at {w}"
        )));
    }
    if sigma.invert().is_err() {
        return Err(Error::Inconsistent("half-braiding is not invertible".into()));
    }
    Ok(sigma)
}

/// σ_{X⊗Y} = σ_X ⊗ σ_Y under the canonical identifications.
pub fn half_braiding_multiplicative(f: &BialgebraMap, x: &ModuleRep, y: &ModuleRep) -> Result<bool> {
    let sx = half_braiding(f, x)?;
    let sy = half_braiding(f, y)?;
    let sxy = half_braiding(f, &x.tensor(y)?)?;
    Ok(sxy == sx.tensor(&sy))
}

#[derive(Clone, Debug, Serialize)]
pub struct MapClassification {
    pub valid: bool,
    pub perfect: Perfectness,
    pub injective: bool,
    #[serde(skip)]
    pub chi_f: Vec<Scalar>,
    pub frobenius: bool,
    pub tensor_frobenius: bool,
    pub g_in_image: bool,
    pub witnesses: Vec<String>,
}

/// Runs the full classification. The two Frobenius tests (χ_f = ε′ and
/// α_H ∘ f = α_{H′}) must agree; disagreement is reported as an inconsistency.
pub fn classify(f: &BialgebraMap, mode: PerfectMode) -> Result<MapClassification> {
    let (hs, ht) = (f.source(), f.target());
    let perfect = is_perfect(f, mode)?;
    let chi = relative_modular_function(f)?;
    let bs = invariants(hs)?;
    let bt = invariants(ht)?;
    let field = hs.field();
    let mut witnesses = Vec::new();
    let chi_bad = (0..hs.dim()).find(|&i| chi[i] != hs.counit()[i]);
    let frobenius = chi_bad.is_none();
    if let Some(i) = chi_bad {
        witnesses.push(format!(
            "χ_f({}) = {} != ε({}) = {}",
            hs.label(i),
            chi[i],
            hs.label(i),
            hs.counit()[i]
        ));
    }
    let alpha_f: Vec<Scalar> = f
        .matrix
        .cols
        .iter()
        .map(|c| c.dot_dense(&bt.alpha, field))
        .collect();
    let alt = alpha_f == bs.alpha;
    if alt != frobenius {
        return Err(Error::Inconsistent(
            "χ_f = ε and α_H ∘ f = α_H′ disagree".into(),
        ));
    }
    let fg = f.apply(&bs.g);
    let g_match = fg == bt.g;
    if frobenius && !g_match {
        witnesses.push(format!(
            "f(g_H′) = {} != g_H = {}",
            ht.format_element(&fg),
            ht.format_element(&bt.g)
        ));
    }
    Ok(MapClassification {
        valid: true,
        perfect,
        injective: f.is_injective(),
        chi_f: chi,
        frobenius,
        tensor_frobenius: frobenius && g_match,
        g_in_image: g_in_image(f)?,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::scalar::Field;

    #[test]
    fn identity_is_tensor_frobenius() {
        let h = builtins::taft(3, 2).unwrap();
        let id = BialgebraMap::identity(&h);
        assert!(id.verify().all_passed());
        let c = classify(&id, PerfectMode::Auto).unwrap();
        assert!(c.frobenius && c.tensor_frobenius && c.g_in_image);
        assert_eq!(c.perfect, Perfectness::Perfect);
        let reg = ModuleRep::regular(&h);
        assert_eq!(half_braiding(&id, &reg).unwrap(), LinearMap::identity(h.field(), 9));
    }

    #[test]
    fn counit_of_taft_not_perfect() {
        let h = builtins::taft(3, 2).unwrap();
        let e = BialgebraMap::counit_map(&h).unwrap();
        assert_eq!(is_perfect(&e, PerfectMode::Auto).unwrap(), Perfectness::NotPerfect);
        assert_eq!(is_perfect(&e, PerfectMode::Skip).unwrap(), Perfectness::Skipped);
    }

    #[test]
    fn projective_examples() {
        let h = builtins::taft(3, 2).unwrap();
        let reg = ModuleRep::regular(&h);
        assert!(projective_test(&reg));
        assert!(projective_test(&reg.direct_sum(&reg).unwrap()));
        assert!(!projective_test(&ModuleRep::trivial(&h)));
        let z2 = builtins::cyclic(2, &Field::rational()).unwrap();
        assert!(projective_test(&ModuleRep::trivial(&z2)));
    }

    #[test]
    fn bad_map_rejected() {
        let h = builtins::cyclic(2, &Field::rational()).unwrap();
        let m = LinearMap::zero(h.field(), 2, 2);
        assert!(BialgebraMap::new("zero", h.clone(), h, m).is_err());
    }

    #[test]
    fn k_subalgebra_of_uqsl2_3() {
        let f = builtins::subalg_k_power(3, 1).unwrap();
        let c = classify(&f, PerfectMode::Auto).unwrap();
        assert!(c.frobenius);
        assert!(!c.tensor_frobenius);
        assert!(c.g_in_image);
        let h = f.target();
        let reg = ModuleRep::regular(h);
        let sigma = half_braiding(&f, &reg).unwrap();
        let k2 = h.parse_element("K^2").unwrap();
        assert_eq!(sigma, reg.operator(&k2));
    }

    #[test]
    fn taft_inclusion_not_frobenius() {
        let f = builtins::inclusion_taft(3).unwrap();
        let c = classify(&f, PerfectMode::Auto).unwrap();
        assert_eq!(c.perfect, Perfectness::Perfect);
        assert!(!c.frobenius);
        let k = f.source().index_of("K").unwrap();
        assert!(!c.chi_f[k].is_one());
    }

    #[test]
    fn unit_maps() {
        let t = builtins::taft(3, 2).unwrap();
        let c = classify(&BialgebraMap::unit_map(&t).unwrap(), PerfectMode::Auto).unwrap();
        assert!(c.frobenius && !c.tensor_frobenius);
    }

    #[test]
    fn composition_rule() {
        // k -> <K> -> uqsl2(3)
        let f = builtins::subalg_k_power(3, 1).unwrap();
        let u = BialgebraMap::unit_map(f.source()).unwrap();
        let fu = f.compose(&u).unwrap();
        let chi_fu = relative_modular_function(&fu).unwrap();
        let chi_u = relative_modular_function(&u).unwrap();
        let chi_f = relative_modular_function(&f).unwrap();
        let chi_f_u: Vec<Scalar> = u.matrix().cols.iter().map(|c| c.dot_dense(&chi_f, u.target().field())).collect();
        assert_eq!(chi_fu, convolution(u.source(), &chi_u, &chi_f_u));
    }
}
