//! H-comodule L-bimodules: the relative category in which L ⊗_L P ≅ P,
//! tensor products over L and left duals †P = Hom_L(P, L).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::comodule::ComoduleAlgebra;
use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::linalg::{LinearMap, Matrix, Quotient, Solution, SparseVec, Subspace};
use crate::report::{Check, Report};
use crate::scalar::Field;

/// An L-bimodule P with left H-coaction ρ(e_i) = Σ c h_j ⊗ e_k stored at
/// `j * dim P + k`. `left[a]` is the operator p ↦ a ≻ p and `right[b]` is
/// p ↦ p ≺ b.
#[derive(Clone, Debug)]
pub struct HLBimodule {
    algebra: Arc<ComoduleAlgebra>,
    labels: Vec<String>,
    left: Vec<LinearMap>,
    right: Vec<LinearMap>,
    coaction: Vec<SparseVec>,
}

fn op_of(ops: &[LinearMap], x: &SparseVec, field: &Field, dim: usize) -> LinearMap {
    let mut acc = LinearMap::zero(field, dim, dim);
    for (i, c) in x.iter() {
        acc = acc.add(&ops[i].scale(c));
    }
    acc
}

impl HLBimodule {
    pub fn new_unchecked(
        algebra: Arc<ComoduleAlgebra>,
        labels: Vec<String>,
        left: Vec<LinearMap>,
        right: Vec<LinearMap>,
        coaction: Vec<SparseVec>,
    ) -> Result<Self> {
        let d = labels.len();
        let dl = algebra.dim();
        let n = algebra.hopf().dim();
        if left.len() != dl || right.len() != dl || coaction.len() != d {
            return Err(Error::dim("bimodule needs one operator per basis element of L on each side"));
        }
        if left.iter().chain(&right).any(|m| m.dom != d || m.cod != d) {
            return Err(Error::dim(format!("bimodule operators must be {d}x{d}")));
        }
        if coaction.iter().any(|v| v.max_index().is_some_and(|m| m >= n * d)) {
            return Err(Error::dim("coaction index out of range"));
        }
        Ok(HLBimodule {
            algebra,
            labels,
            left,
            right,
            coaction,
        })
    }

    pub fn new(
        algebra: Arc<ComoduleAlgebra>,
        labels: Vec<String>,
        left: Vec<LinearMap>,
        right: Vec<LinearMap>,
        coaction: Vec<SparseVec>,
    ) -> Result<Self> {
        let p = HLBimodule::new_unchecked(algebra, labels, left, right, coaction)?;
        p.verify().into_result()?;
        Ok(p)
    }

    /// L as a bimodule over itself, the unit object.
    pub fn regular(l: &Arc<ComoduleAlgebra>) -> Self {
        let f = l.field();
        let d = l.dim();
        let left = (0..d).map(|i| l.left_mul_map(&SparseVec::unit(i, f))).collect();
        let right = (0..d).map(|i| l.right_mul_map(&SparseVec::unit(i, f))).collect();
        let coaction = (0..d).map(|i| l.coaction_basis(i).clone()).collect();
        HLBimodule {
            algebra: l.clone(),
            labels: l.labels().to_vec(),
            left,
            right,
            coaction,
        }
    }

    pub fn direct_sum(&self, other: &HLBimodule) -> Result<Self> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::InvalidParameter("bimodules over different algebras".into()));
        }
        let (d1, d2) = (self.dim(), other.dim());
        let d = d1 + d2;
        let sum = |a: &LinearMap, b: &LinearMap| {
            let mut cols = a.cols.clone();
            cols.extend(b.cols.iter().map(|c| c.reindex(|i| i + d1)));
            LinearMap { field: a.field.clone(), dom: d, cod: d, cols }
        };
        let left = self.left.iter().zip(&other.left).map(|(a, b)| sum(a, b)).collect();
        let right = self.right.iter().zip(&other.right).map(|(a, b)| sum(a, b)).collect();
        let mut coaction: Vec<SparseVec> = self
            .coaction
            .iter()
            .map(|v| v.reindex(|jk| (jk / d1) * d + jk % d1))
            .collect();
        coaction.extend(other.coaction.iter().map(|v| v.reindex(|jk| (jk / d2) * d + d1 + jk % d2)));
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("{l}@0")).collect();
        labels.extend(other.labels.iter().map(|l| format!("{l}@1")));
        HLBimodule::new_unchecked(self.algebra.clone(), labels, left, right, coaction)
    }

    pub fn algebra(&self) -> &Arc<ComoduleAlgebra> {
        &self.algebra
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        self.algebra.hopf()
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn left_ops(&self) -> &[LinearMap] {
        &self.left
    }

    pub fn right_ops(&self) -> &[LinearMap] {
        &self.right
    }

    pub fn coaction_basis(&self, i: usize) -> &SparseVec {
        &self.coaction[i]
    }

    pub fn act_left(&self, a: &SparseVec, p: &SparseVec) -> SparseVec {
        op_of(&self.left, a, self.field(), self.dim()).apply(p)
    }

    pub fn act_right(&self, p: &SparseVec, b: &SparseVec) -> SparseVec {
        op_of(&self.right, b, self.field(), self.dim()).apply(p)
    }

    pub fn coact(&self, p: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(p.iter().map(|(i, c)| (c, &self.coaction[i])))
    }

    /// Product (H ⊗ L) · (H ⊗ P) → H ⊗ P via ≻, or (H ⊗ P)(H ⊗ L) via ≺.
    fn mixed(&self, hl: &SparseVec, hp: &SparseVec, left: bool) -> SparseVec {
        let h = self.hopf();
        let (dl, d) = (self.algebra.dim(), self.dim());
        let mut all = Vec::new();
        for (i, a) in hl.iter() {
            for (j, b) in hp.iter() {
                let ab = a * b;
                let prod = if left { h.mul_basis(i / dl, j / d) } else { h.mul_basis(j / d, i / dl) };
                let op = if left { &self.left[i % dl] } else { &self.right[i % dl] };
                let v = &op.cols[j % d];
                for (k1, c1) in prod.iter() {
                    let c1 = c1 * &ab;
                    for (k2, c2) in v.iter() {
                        all.push((k1 * d + k2, &c1 * c2));
                    }
                }
            }
        }
        SparseVec::from_entries(all)
    }

    pub fn verify(&self) -> Report {
        let l = &self.algebra;
        let h = self.hopf();
        let f = self.field();
        let (dl, d, n) = (l.dim(), self.dim(), h.dim());
        let mut r = Report::new("relative bimodule");
        let id = LinearMap::identity(f, d);
        let unit = (op_of(&self.left, l.unit(), f, d) != id || op_of(&self.right, l.unit(), f, d) != id)
            .then(|| "1 does not act as identity".to_string());
        r.push(Check::from_witness("unit", unit));
        let pairs = || (0..dl).flat_map(move |a| (0..dl).map(move |b| (a, b)));
        let left = pairs().find_map(|(a, b)| {
            let lhs = self.left[a].compose(&self.left[b]).expect("square");
            (lhs != op_of(&self.left, l.mul_basis(a, b), f, d)).then(|| format!("{} ≻ ({} ≻ -)", l.labels()[a], l.labels()[b]))
        });
        r.push(Check::from_witness("left_module", left));
        let right = pairs().find_map(|(a, b)| {
            let lhs = self.right[b].compose(&self.right[a]).expect("square");
            (lhs != op_of(&self.right, l.mul_basis(a, b), f, d)).then(|| format!("(- ≺ {}) ≺ {}", l.labels()[a], l.labels()[b]))
        });
        r.push(Check::from_witness("right_module", right));
        let commute = pairs().find_map(|(a, b)| {
            let x = self.left[a].compose(&self.right[b]).expect("square");
            let y = self.right[b].compose(&self.left[a]).expect("square");
            (x != y).then(|| format!("{} ≻ - ≺ {}", l.labels()[a], l.labels()[b]))
        });
        r.push(Check::from_witness("bimodule", commute));
        let coassoc = (0..d).find_map(|i| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for (jk, c) in self.coaction[i].iter() {
                let (j, k) = (jk / d, jk % d);
                for (ab, x) in h.comul_basis(j).iter() {
                    lhs.push((ab * d + k, c * x));
                }
                for (bk, x) in self.coaction[k].iter() {
                    rhs.push((j * n * d + bk, c * x));
                }
            }
            (SparseVec::from_entries(lhs) != SparseVec::from_entries(rhs)).then(|| self.labels[i].clone())
        });
        r.push(Check::from_witness("coassociativity", coassoc));
        let counit = (0..d).find_map(|i| {
            let v = SparseVec::from_entries(
                self.coaction[i].iter().map(|(jk, c)| (jk % d, c * &h.counit()[jk / d])).collect(),
            );
            (v != SparseVec::unit(i, f)).then(|| self.labels[i].clone())
        });
        r.push(Check::from_witness("counit", counit));
        let colinear = (0..dl).find_map(|a| {
            (0..d).find_map(|p| {
                let ea = SparseVec::unit(a, f);
                let ep = SparseVec::unit(p, f);
                let lhs = self.coact(&self.act_left(&ea, &ep));
                let rhs = self.mixed(l.coaction_basis(a), &self.coaction[p], true);
                if lhs != rhs {
                    return Some(format!("ρ({} ≻ {})", l.labels()[a], self.labels[p]));
                }
                let lhs = self.coact(&self.act_right(&ep, &ea));
                let rhs = self.mixed(l.coaction_basis(a), &self.coaction[p], false);
                (lhs != rhs).then(|| format!("ρ({} ≺ {})", self.labels[p], l.labels()[a]))
            })
        });
        r.push(Check::from_witness("coaction_compatible", colinear));
        r
    }

    /// First failure of `phi: self → target` to be L-bilinear and H-colinear.
    pub fn morphism_witness(&self, target: &HLBimodule, phi: &LinearMap) -> Option<String> {
        let dl = self.algebra.dim();
        let n = self.hopf().dim();
        for a in 0..dl {
            let x = phi.compose(&self.left[a]).ok()?;
            if x != target.left[a].compose(phi).ok()? {
                return Some(format!("left action of {}", self.algebra.labels()[a]));
            }
            let x = phi.compose(&self.right[a]).ok()?;
            if x != target.right[a].compose(phi).ok()? {
                return Some(format!("right action of {}", self.algebra.labels()[a]));
            }
        }
        let id_phi = LinearMap::identity(self.field(), n).tensor(phi);
        (0..self.dim()).find_map(|p| {
            let lhs = target.coact(&phi.cols[p]);
            let rhs = id_phi.apply(&self.coaction[p]);
            (lhs != rhs).then(|| format!("coaction at {}", self.labels[p]))
        })
    }
}

/// P ⊗_L Q with the quotient map from P ⊗ Q.
#[derive(Clone, Debug)]
pub struct TensorOverL {
    pub module: HLBimodule,
    pub quotient: Quotient,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl TensorOverL {
    /// Class of the pure tensor e_p ⊗ e_q.
    pub fn class(&self, p: usize, q: usize) -> SparseVec {
        let f = self.module.field();
        self.quotient.project(&SparseVec::unit(p * self.right_dim + q, f))
    }

    /// (p, q) indices of the pure tensor representing quotient basis element k.
    pub fn representative(&self, k: usize) -> (usize, usize) {
        let i = self.quotient.lift(k);
        (i / self.right_dim, i % self.right_dim)
    }
}

pub fn tensor_over_l(p: &HLBimodule, q: &HLBimodule) -> Result<TensorOverL> {
    if !Arc::ptr_eq(p.algebra(), q.algebra()) {
        return Err(Error::InvalidParameter("bimodules over different comodule algebras".into()));
    }
    let l = p.algebra();
    let f = p.field();
    let h = p.hopf();
    let (dp, dq, dl) = (p.dim(), q.dim(), l.dim());
    let mut rels = Vec::new();
    for a in 0..dl {
        for i in 0..dp {
            for j in 0..dq {
                let left = crate::linalg::tensor_vec(&p.right[a].cols[i], &SparseVec::unit(j, f), dq);
                let right = crate::linalg::tensor_vec(&SparseVec::unit(i, f), &q.left[a].cols[j], dq);
                let r = left.sub(&right);
                if !r.is_zero() {
                    rels.push(r);
                }
            }
        }
    }
    let quotient = Quotient::new(f, dp * dq, rels);
    let k = quotient.dim();
    let rep = |s: usize| {
        let i = quotient.lift(s);
        (i / dq, i % dq)
    };
    let labels: Vec<String> = (0..k)
        .map(|s| {
            let (i, j) = rep(s);
            format!("{}|{}", p.labels[i], q.labels[j])
        })
        .collect();
    let left = (0..dl)
        .map(|a| {
            LinearMap::from_fn(f, k, k, |s| {
                let (i, j) = rep(s);
                quotient.project(&crate::linalg::tensor_vec(&p.left[a].cols[i], &SparseVec::unit(j, f), dq))
            })
        })
        .collect();
    let right = (0..dl)
        .map(|a| {
            LinearMap::from_fn(f, k, k, |s| {
                let (i, j) = rep(s);
                quotient.project(&crate::linalg::tensor_vec(&SparseVec::unit(i, f), &q.right[a].cols[j], dq))
            })
        })
        .collect();
    let coaction = (0..k)
        .map(|s| {
            let (i, j) = rep(s);
            // p_{-1} q_{-1} ⊗ [p_0 ⊗ q_0]
            let mut by_h: BTreeMap<usize, Vec<(usize, crate::Scalar)>> = BTreeMap::new();
            for (x, a) in p.coaction[i].iter() {
                for (y, b) in q.coaction[j].iter() {
                    let ab = a * b;
                    for (hh, c) in h.mul_basis(x / dp, y / dq).iter() {
                        by_h.entry(hh).or_default().push(((x % dp) * dq + y % dq, c * &ab));
                    }
                }
            }
            let mut all = Vec::new();
            for (hh, entries) in by_h {
                for (t, c) in quotient.project(&SparseVec::from_entries(entries)).iter() {
                    all.push((hh * k + t, c.clone()));
                }
            }
            SparseVec::from_entries(all)
        })
        .collect();
    let module = HLBimodule::new_unchecked(l.clone(), labels, left, right, coaction)?;
    if let Some(w) = module.verify().failures().next() {
        return Err(Error::Inconsistent(format!("P ⊗_L Q fails {}", w.name)));
    }
    Ok(TensorOverL {
        module,
        quotient,
        left_dim: dp,
        right_dim: dq,
    })
}

/// Hom_L(P, L): left L-linear maps, as vectors indexed `p * dim L + l`.
pub fn hom_l(p: &HLBimodule) -> Subspace {
    let l = p.algebra();
    let f = p.field();
    let (dp, dl) = (p.dim(), l.dim());
    let nvars = dp * dl;
    let mut rows = Vec::new();
    for a in 0..dl {
        let ea = SparseVec::unit(a, f);
        for j in 0..dp {
            // φ(a ≻ p_j) - a φ(p_j) = 0, one row per output coordinate
            let mut eqs: Vec<Vec<(usize, crate::Scalar)>> = vec![Vec::new(); dl];
            for (k, c) in p.left[a].cols[j].iter() {
                for (t, e) in eqs.iter_mut().enumerate() {
                    e.push((k * dl + t, c.clone()));
                }
            }
            for m in 0..dl {
                for (t, c) in l.mul(&ea, &SparseVec::unit(m, f)).iter() {
                    eqs[t].push((j * dl + m, -c));
                }
            }
            rows.extend(eqs.into_iter().map(SparseVec::from_entries).filter(|r| !r.is_zero()));
        }
    }
    let m = Matrix::from_rows(f, nvars, rows).expect("indices in range");
    Subspace::new(f, nvars, m.kernel())
}

/// φ(v) for φ stored as in [`hom_l`].
pub fn apply_hom(phi: &SparseVec, v: &SparseVec, dl: usize) -> SparseVec {
    let mut all = Vec::new();
    for (pl, c) in phi.iter() {
        if let Some(x) = v.get(pl / dl) {
            all.push((pl % dl, c * x));
        }
    }
    SparseVec::from_entries(all)
}

/// Elements b_i of P and left L-linear functionals b^i with Σ b^i(p) ≻ b_i = p.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub elements: Vec<SparseVec>,
    /// Functionals as vectors in the ambient space of [`hom_l`].
    pub functionals: Vec<SparseVec>,
}

pub fn dual_basis(p: &HLBimodule) -> Result<DualBasis> {
    let hom = hom_l(p);
    dual_basis_in(p, &hom)
}

fn dual_basis_in(p: &HLBimodule, hom: &Subspace) -> Result<DualBasis> {
    let f = p.field();
    let (dp, dl, m) = (p.dim(), p.algebra().dim(), hom.dim());
    // unknown c[i][t]: b^i = Σ_t c[i][t] φ_t, variable index i * m + t
    let mut cols: Vec<SparseVec> = Vec::with_capacity(dp * m);
    for i in 0..dp {
        for t in 0..m {
            let phi = hom.vector(t);
            let mut entries = Vec::new();
            for j in 0..dp {
                let val = apply_hom(phi, &SparseVec::unit(j, f), dl);
                let v = p.act_left(&val, &SparseVec::unit(i, f));
                entries.extend(v.iter().map(|(k, c)| (j * dp + k, c.clone())));
            }
            cols.push(SparseVec::from_entries(entries));
        }
    }
    let rhs = SparseVec::from_entries((0..dp).map(|j| (j * dp + j, f.one())).collect());
    let system = Matrix::from_columns(f, dp * dp, &cols)?;
    let x = match system.solve(&rhs)? {
        Solution::Consistent { x, .. } => x,
        Solution::Inconsistent => {
            return Err(Error::InvalidParameter("not projective as left L-module".into()))
        }
    };
    let functionals: Vec<SparseVec> = (0..dp)
        .map(|i| {
            let c = SparseVec::from_entries(
                x.iter().filter(|(v, _)| v / m.max(1) == i).map(|(v, c)| (v % m, c.clone())).collect(),
            );
            hom.embed(&c)
        })
        .collect();
    let elements: Vec<SparseVec> = (0..dp).map(|i| SparseVec::unit(i, f)).collect();
    for j in 0..dp {
        let ej = SparseVec::unit(j, f);
        let mut acc = SparseVec::new();
        for (bi, b) in functionals.iter().zip(&elements) {
            acc = acc.add(&p.act_left(&apply_hom(bi, &ej, dl), b));
        }
        if acc != ej {
            return Err(Error::Inconsistent(format!("dual basis identity fails at {}", p.labels[j])));
        }
    }
    Ok(DualBasis { elements, functionals })
}

/// †P with its evaluation P ⊗_L †P → L and coevaluation L → †P ⊗_L P.
#[derive(Clone, Debug)]
pub struct LeftDual {
    pub dual: HLBimodule,
    pub hom: Subspace,
    pub basis: DualBasis,
    pub p_dual: TensorOverL,
    pub dual_p: TensorOverL,
    pub ev: LinearMap,
    pub coev: LinearMap,
}

pub fn left_dual(p: &HLBimodule) -> Result<LeftDual> {
    let l = p.algebra().clone();
    let h = p.hopf().clone();
    let f = p.field().clone();
    let (dp, dl) = (p.dim(), l.dim());
    let hom = hom_l(p);
    let m = hom.dim();
    let basis = dual_basis_in(p, &hom)?;
    let coords = |v: &SparseVec| {
        hom.coords(v)
            .ok_or_else(|| Error::Inconsistent("map left Hom_L(P, L)".into()))
    };
    let build = |g: &dyn Fn(&SparseVec, usize) -> SparseVec| -> Result<Vec<LinearMap>> {
        (0..dl)
            .map(|a| {
                let cols = (0..m)
                    .map(|t| coords(&g(hom.vector(t), a)))
                    .collect::<Result<Vec<_>>>()?;
                LinearMap::new(&f, m, m, cols)
            })
            .collect()
    };
    // (a ≻ φ)(p) = φ(p ≺ a)
    let left = build(&|phi, a| {
        let mut all = Vec::new();
        for j in 0..dp {
            for (t, c) in apply_hom(phi, &p.right[a].cols[j], dl).iter() {
                all.push((j * dl + t, c.clone()));
            }
        }
        SparseVec::from_entries(all)
    })?;
    // (φ ≺ a)(p) = φ(p) a
    let right = build(&|phi, a| {
        let ea = SparseVec::unit(a, &f);
        let mut all = Vec::new();
        for j in 0..dp {
            let v = apply_hom(phi, &SparseVec::unit(j, &f), dl);
            for (t, c) in l.mul(&v, &ea).iter() {
                all.push((j * dl + t, c.clone()));
            }
        }
        SparseVec::from_entries(all)
    })?;
    // φ_{-1} ⊗ φ_0(p) = S(p_{-1}) φ(p_0)_{-1} ⊗ φ(p_0)_0
    let coaction = (0..m)
        .map(|t| {
            let phi = hom.vector(t);
            let mut by_h: BTreeMap<usize, Vec<(usize, crate::Scalar)>> = BTreeMap::new();
            for j in 0..dp {
                for (xk, c) in p.coaction[j].iter() {
                    let s = h.antipode_basis(xk / dp);
                    let val = apply_hom(phi, &SparseVec::unit(xk % dp, &f), dl);
                    let dv = l.coact(&val);
                    for (yl, c2) in dv.iter() {
                        let prod = h.mul(s, &SparseVec::unit(yl / dl, &f));
                        for (hh, c3) in prod.iter() {
                            by_h.entry(hh)
                                .or_default()
                                .push((j * dl + yl % dl, &(c * c2) * c3));
                        }
                    }
                }
            }
            let mut all = Vec::new();
            for (hh, e) in by_h {
                for (s, c) in coords(&SparseVec::from_entries(e))?.iter() {
                    all.push((hh * m + s, c.clone()));
                }
            }
            Ok(SparseVec::from_entries(all))
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..m).map(|t| format!("φ{t}")).collect();
    let dual = HLBimodule::new_unchecked(l.clone(), labels, left, right, coaction)?;
    if let Some(c) = dual.verify().failures().next() {
        return Err(Error::Inconsistent(format!("†P fails {}", c.name)));
    }
    let p_dual = tensor_over_l(p, &dual)?;
    let dual_p = tensor_over_l(&dual, p)?;
    // ev on P ⊗ †P before the quotient, checked to vanish on the relations
    let ev_full = LinearMap::from_fn(&f, dp * m, dl, |i| {
        apply_hom(hom.vector(i % m), &SparseVec::unit(i / m, &f), dl)
    });
    let ev = LinearMap::from_fn(&f, p_dual.quotient.dim(), dl, |s| ev_full.cols[p_dual.quotient.lift(s)].clone());
    for i in 0..dp * m {
        let e = SparseVec::unit(i, &f);
        let back = p_dual.quotient.lift_vec(&p_dual.quotient.project(&e));
        if ev_full.apply(&e) != ev_full.apply(&back) {
            return Err(Error::Inconsistent("ev is not balanced".into()));
        }
    }
    // coev(l) = Σ b^i ⊗ b_i ≺ l
    let coev = LinearMap::from_fn(&f, dl, dual_p.quotient.dim(), |a| {
        let mut all = Vec::new();
        for (bi, b) in basis.functionals.iter().zip(&basis.elements) {
            let bc = hom.coords(bi).expect("functional in Hom_L");
            let br = p.act_right(b, &SparseVec::unit(a, &f));
            for (t, c) in bc.iter() {
                for (q, x) in br.iter() {
                    all.push((t * dp + q, c * x));
                }
            }
        }
        dual_p.quotient.project(&SparseVec::from_entries(all))
    });
    let regular = HLBimodule::regular(&l);
    if let Some(w) = p_dual.module.morphism_witness(&regular, &ev) {
        return Err(Error::Inconsistent(format!("ev is not a morphism: {w}")));
    }
    if let Some(w) = regular.morphism_witness(&dual_p.module, &coev) {
        return Err(Error::Inconsistent(format!("coev is not a morphism: {w}")));
    }
    let out = LeftDual {
        dual,
        hom,
        basis,
        p_dual,
        dual_p,
        ev,
        coev,
    };
    let (z1, z2) = out.zigzags(p);
    if !z1 || !z2 {
        return Err(Error::Inconsistent("zig-zag identity fails for †P".into()));
    }
    Ok(out)
}

impl LeftDual {
    /// ev on a pure tensor p ⊗ φ_t (before passing to P ⊗_L †P).
    pub fn ev_pure(&self, p: &SparseVec, t: usize, dl: usize) -> SparseVec {
        apply_hom(self.hom.vector(t), p, dl)
    }

    /// coev(1) lifted to †P ⊗ P, as (φ index, P vector) pairs.
    pub fn coev_terms(&self, l: &SparseVec) -> Vec<(usize, SparseVec)> {
        let v = self.dual_p.quotient.lift_vec(&self.coev.apply(l));
        let dp = self.dual_p.right_dim;
        let mut by_t: BTreeMap<usize, Vec<(usize, crate::Scalar)>> = BTreeMap::new();
        for (i, c) in v.iter() {
            by_t.entry(i / dp).or_default().push((i % dp, c.clone()));
        }
        by_t.into_iter().map(|(t, e)| (t, SparseVec::from_entries(e))).collect()
    }

    /// (ev ⊗ id)(id ⊗ coev) = id_P and (id ⊗ ev)(coev ⊗ id) = id_{†P}.
    pub fn zigzags(&self, p: &HLBimodule) -> (bool, bool) {
        let f = p.field();
        let dl = p.algebra().dim();
        let one = p.algebra().unit().clone();
        let terms = self.coev_terms(&one);
        let first = LinearMap::from_fn(f, p.dim(), p.dim(), |j| {
            let ej = SparseVec::unit(j, f);
            let mut acc = SparseVec::new();
            for (t, q) in &terms {
                acc = acc.add(&p.act_left(&self.ev_pure(&ej, *t, dl), q));
            }
            acc
        });
        let m = self.hom.dim();
        let second = LinearMap::from_fn(f, m, m, |s| {
            let mut acc = SparseVec::new();
            for (t, q) in &terms {
                let val = self.ev_pure(q, s, dl);
                acc = acc.add(&self.dual.act_right(&SparseVec::unit(*t, f), &val));
            }
            acc
        });
        (
            first == LinearMap::identity(f, p.dim()),
            second == LinearMap::identity(f, m),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::scalar::Field;

    fn kz2_regular() -> Arc<ComoduleAlgebra> {
        let h = builtins::cyclic(2, &Field::rational()).unwrap();
        Arc::new(ComoduleAlgebra::regular(&h))
    }

    #[test]
    fn unit_object_tensor() {
        let l = kz2_regular();
        let p = HLBimodule::regular(&l);
        assert!(p.verify().all_passed());
        let t = tensor_over_l(&p, &p).unwrap();
        assert_eq!(t.module.dim(), 2);
        let s = p.direct_sum(&p).unwrap();
        assert!(s.verify().all_passed());
        let t = tensor_over_l(&p, &s).unwrap();
        assert_eq!(t.module.dim(), 4);
    }

    #[test]
    fn dual_of_unit() {
        let l = kz2_regular();
        let p = HLBimodule::regular(&l);
        let b = dual_basis(&p).unwrap();
        assert_eq!(b.functionals.len(), 2);
        let d = left_dual(&p).unwrap();
        assert_eq!(d.dual.dim(), 2);
        assert_eq!(d.zigzags(&p), (true, true));
    }

    #[test]
    fn regular_over_k_subalgebra() {
        let f = builtins::subalg_k_power(3, 1).unwrap();
        let h = f.target().clone();
        let k = Arc::new(ComoduleAlgebra::regular(f.source()).pushforward(&f).unwrap());
        // H as a bimodule over ⟨K⟩ by multiplication, coaction Δ
        let field = h.field().clone();
        let left = (0..3).map(|a| h.left_mul_map(&f.apply(&SparseVec::unit(a, &field)))).collect();
        let right = (0..3)
            .map(|a| {
                let x = f.apply(&SparseVec::unit(a, &field));
                LinearMap::from_fn(&field, 27, 27, |j| h.mul(&SparseVec::unit(j, &field), &x))
            })
            .collect();
        let coaction = (0..27).map(|i| h.comul_basis(i).clone()).collect();
        let p = HLBimodule::new(k, h.labels().to_vec(), left, right, coaction).unwrap();
        let b = dual_basis(&p).unwrap();
        assert_eq!(b.elements.len(), 27);
    }
}
