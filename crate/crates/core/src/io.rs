//! JSON spec files for Hopf algebras, maps, comodule algebras and bimodules.
//!
//! Coefficients are scalar literals (`"1/2*z^2 - z + 3"`); plain JSON
//! integers are accepted too. Indices are 0-based. References to other
//! objects (`source`, `target`, `hopf`, `algebra`) are either inline specs,
//! paths to spec files (relative to the referring file) or builtin
//! descriptors such as `"uqsl2(3)"`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bimodule::HLBimodule;
use crate::comodule::ComoduleAlgebra;
use crate::descriptor::Descriptor;
use crate::error::{Error, Result};
use crate::hopf::{HopfAlgebra, Tables};
use crate::linalg::{LinearMap, SparseVec};
use crate::maps::BialgebraMap;
use crate::scalar::{Field, Scalar};

/// A coefficient as written in a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lit(pub String);

impl Serialize for Lit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Lit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            S(String),
            I(i64),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::S(s) => Lit(s),
            Repr::I(i) => Lit(i.to_string()),
        })
    }
}

impl From<&Scalar> for Lit {
    fn from(c: &Scalar) -> Self {
        Lit(c.to_string())
    }
}

fn scalar(field: &Field, lit: &Lit, at: impl FnOnce() -> String) -> Result<Scalar> {
    field.parse(&lit.0).map_err(|e| Error::parse(at(), e.to_string()))
}

/// Reference to another object: inline, file path or builtin descriptor.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Ref(String),
    Inline(Box<T>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub mult: Vec<(usize, usize, usize, Lit)>,
    pub unit: Vec<(usize, Lit)>,
    pub comult: Vec<(usize, usize, usize, Lit)>,
    pub counit: Vec<(usize, Lit)>,
    /// `(row, col, c)`: S(e_col) has coefficient c at e_row.
    pub antipode: Vec<(usize, usize, Lit)>,
}

impl HopfSpec {
    pub fn from_hopf(h: &HopfAlgebra) -> HopfSpec {
        let t = h.to_tables();
        let l3 = |v: Vec<(usize, usize, usize, Scalar)>| v.into_iter().map(|(a, b, c, x)| (a, b, c, Lit::from(&x))).collect();
        let l1 = |v: Vec<(usize, Scalar)>| v.into_iter().map(|(a, x)| (a, Lit::from(&x))).collect();
        HopfSpec {
            name: Some(h.name().to_string()),
            field: t.field.spec().to_string(),
            dim: t.labels.len(),
            basis: t.labels,
            mult: l3(t.mult),
            unit: l1(t.unit),
            comult: l3(t.comult),
            counit: l1(t.counit),
            antipode: t.antipode.into_iter().map(|(a, b, x)| (a, b, Lit::from(&x))).collect(),
        }
    }

    /// Builds the algebra without checking the axioms.
    pub fn build_unchecked(&self) -> Result<HopfAlgebra> {
        let field = Field::new(self.field.parse()?)?;
        if self.basis.len() != self.dim {
            return Err(Error::parse("basis", format!("{} labels for dim {}", self.basis.len(), self.dim)));
        }
        let f = &field;
        let t3 = |key: &str, v: &[(usize, usize, usize, Lit)]| {
            v.iter()
                .enumerate()
                .map(|(n, (a, b, c, x))| Ok((*a, *b, *c, scalar(f, x, || format!("{key}[{n}]"))?)))
                .collect::<Result<Vec<_>>>()
        };
        let t1 = |key: &str, v: &[(usize, Lit)]| {
            v.iter()
                .enumerate()
                .map(|(n, (a, x))| Ok((*a, scalar(f, x, || format!("{key}[{n}]"))?)))
                .collect::<Result<Vec<_>>>()
        };
        let tables = Tables {
            field: field.clone(),
            labels: self.basis.clone(),
            mult: t3("mult", &self.mult)?,
            unit: t1("unit", &self.unit)?,
            comult: t3("comult", &self.comult)?,
            counit: t1("counit", &self.counit)?,
            antipode: self
                .antipode
                .iter()
                .enumerate()
                .map(|(n, (a, b, x))| Ok((*a, *b, scalar(f, x, || format!("antipode[{n}]"))?)))
                .collect::<Result<Vec<_>>>()?,
        };
        HopfAlgebra::from_tables_unchecked(self.name.clone().unwrap_or_else(|| "file".into()), tables)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: Source<HopfSpec>,
    pub target: Source<HopfSpec>,
    /// `(row, col, c)`: f(e_col) has coefficient c at e_row.
    pub matrix: Vec<(usize, usize, Lit)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleSpec {
    pub hopf: Source<HopfSpec>,
    pub basis: Vec<String>,
    pub mult: Vec<(usize, usize, usize, Lit)>,
    pub unit: Vec<(usize, Lit)>,
    /// `(i, h, k, c)`: δ(e_i) contains c h ⊗ e_k.
    pub coaction: Vec<(usize, usize, usize, Lit)>,
    #[serde(default)]
    pub exact_asserted: bool,
    #[serde(default)]
    pub indecomposable_asserted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSpec {
    pub algebra: Source<ComoduleSpec>,
    pub basis: Vec<String>,
    /// `(a, p, q, c)`: e_a ≻ e_p has coefficient c at e_q.
    pub left: Vec<(usize, usize, usize, Lit)>,
    /// `(p, a, q, c)`: e_p ≺ e_a has coefficient c at e_q.
    pub right: Vec<(usize, usize, usize, Lit)>,
    /// `(p, h, q, c)`: δ(e_p) contains c h ⊗ e_q.
    pub coaction: Vec<(usize, usize, usize, Lit)>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::parse(
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn check_range(what: &str, n: usize, i: usize, bound: usize) -> Result<()> {
    if i >= bound {
        return Err(Error::parse(format!("{what}[{n}]"), format!("index {i} out of range (< {bound})")));
    }
    Ok(())
}

/// Resolves file references relative to a base directory.
#[derive(Clone, Debug, Default)]
pub struct Loader {
    pub base: PathBuf,
}

impl Loader {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Loader { base: base.into() }
    }

    fn path(&self, r: &str) -> Option<PathBuf> {
        let p = self.base.join(r);
        p.is_file().then_some(p)
    }

    fn child(path: &Path) -> Loader {
        Loader::new(path.parent().map(Path::to_path_buf).unwrap_or_default())
    }

    /// A Hopf algebra from a reference, without verification for files.
    pub fn hopf_unchecked(&self, r: &Source<HopfSpec>) -> Result<Arc<HopfAlgebra>> {
        match r {
            Source::Inline(spec) => Ok(Arc::new(spec.build_unchecked()?)),
            Source::Ref(s) => match self.path(s) {
                Some(p) => Ok(Arc::new(read_json::<HopfSpec>(&p)?.build_unchecked()?)),
                None => s.parse::<Descriptor>()?.resolve_hopf(),
            },
        }
    }

    /// A verified Hopf algebra.
    pub fn hopf(&self, r: &Source<HopfSpec>) -> Result<Arc<HopfAlgebra>> {
        let h = self.hopf_unchecked(r)?;
        let report = h.verify_axioms();
        if !report.all_passed() {
            return Err(Error::Verification(Box::new(report)));
        }
        Ok(h)
    }

    pub fn map_unchecked(&self, r: &Source<MapSpec>) -> Result<Arc<BialgebraMap>> {
        let (spec, loader) = match r {
            Source::Inline(spec) => ((**spec).clone(), self.clone()),
            Source::Ref(s) => match self.path(s) {
                Some(p) => (read_json::<MapSpec>(&p)?, Loader::child(&p)),
                None => return s.parse::<Descriptor>()?.resolve_map(),
            },
        };
        let source = loader.hopf(&spec.source)?;
        let target = loader.hopf(&spec.target)?;
        let field = target.field().clone();
        let (m, n) = (source.dim(), target.dim());
        let mut cols = vec![Vec::new(); m];
        for (k, (row, col, c)) in spec.matrix.iter().enumerate() {
            check_range("matrix", k, *row, n)?;
            check_range("matrix", k, *col, m)?;
            cols[*col].push((*row, scalar(&field, c, || format!("matrix[{k}]"))?));
        }
        let cols = cols.into_iter().map(SparseVec::from_entries).collect();
        let matrix = LinearMap::new(&field, m, n, cols)?;
        let name = spec.name.unwrap_or_else(|| "map".into());
        Ok(Arc::new(BialgebraMap::new_unchecked(name, source, target, matrix)?))
    }

    pub fn comodule(&self, r: &Source<ComoduleSpec>) -> Result<Arc<ComoduleAlgebra>> {
        let (spec, loader) = match r {
            Source::Inline(spec) => ((**spec).clone(), self.clone()),
            Source::Ref(s) => match self.path(s) {
                Some(p) => (read_json::<ComoduleSpec>(&p)?, Loader::child(&p)),
                None => return s.parse::<Descriptor>()?.resolve_comodule(),
            },
        };
        let h = loader.hopf(&spec.hopf)?;
        let field = h.field().clone();
        let (d, n) = (spec.basis.len(), h.dim());
        let mut mult = vec![Vec::new(); d * d];
        for (k, (i, j, o, c)) in spec.mult.iter().enumerate() {
            for x in [i, j, o] {
                check_range("mult", k, *x, d)?;
            }
            mult[i * d + j].push((*o, scalar(&field, c, || format!("mult[{k}]"))?));
        }
        let mut unit = Vec::new();
        for (k, (i, c)) in spec.unit.iter().enumerate() {
            check_range("unit", k, *i, d)?;
            unit.push((*i, scalar(&field, c, || format!("unit[{k}]"))?));
        }
        let mut coaction = vec![Vec::new(); d];
        for (k, (i, hh, o, c)) in spec.coaction.iter().enumerate() {
            check_range("coaction", k, *i, d)?;
            check_range("coaction", k, *hh, n)?;
            check_range("coaction", k, *o, d)?;
            coaction[*i].push((hh * d + o, scalar(&field, c, || format!("coaction[{k}]"))?));
        }
        let mut l = ComoduleAlgebra::new(
            h,
            spec.basis.clone(),
            mult.into_iter().map(SparseVec::from_entries).collect(),
            SparseVec::from_entries(unit),
            coaction.into_iter().map(SparseVec::from_entries).collect(),
        )?;
        l.exact_asserted = spec.exact_asserted;
        l.indecomposable_asserted = spec.indecomposable_asserted;
        Ok(Arc::new(l))
    }

    /// A bimodule from a spec file, or `regular(<comodule>)` for L itself.
    pub fn bimodule(&self, r: &str) -> Result<HLBimodule> {
        let Some(p) = self.path(r) else {
            let inner = r
                .trim()
                .strip_prefix("regular(")
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| Error::parse(r, "expected a bimodule file or regular(<comodule>)"))?;
            let l = self.comodule(&Source::Ref(inner.to_string()))?;
            return Ok(HLBimodule::regular(&l));
        };
        let spec: BimoduleSpec = read_json(&p)?;
        let l = Loader::child(&p).comodule(&spec.algebra)?;
        self.bimodule_from_spec(&spec, l)
    }

    pub fn bimodule_from_spec(&self, spec: &BimoduleSpec, l: Arc<ComoduleAlgebra>) -> Result<HLBimodule> {
        let field = l.field().clone();
        let (d, dl, n) = (spec.basis.len(), l.dim(), l.hopf().dim());
        let ops = |key: &str, v: &[(usize, usize, usize, Lit)], left: bool| -> Result<Vec<LinearMap>> {
            let mut cols = vec![vec![Vec::new(); d]; dl];
            for (k, (x, y, o, c)) in v.iter().enumerate() {
                let (a, p) = if left { (*x, *y) } else { (*y, *x) };
                check_range(key, k, a, dl)?;
                check_range(key, k, p, d)?;
                check_range(key, k, *o, d)?;
                cols[a][p].push((*o, scalar(&field, c, || format!("{key}[{k}]"))?));
            }
            cols.into_iter()
                .map(|cs| LinearMap::new(&field, d, d, cs.into_iter().map(SparseVec::from_entries).collect()))
                .collect()
        };
        let left = ops("left", &spec.left, true)?;
        let right = ops("right", &spec.right, false)?;
        let mut coaction = vec![Vec::new(); d];
        for (k, (p, hh, q, c)) in spec.coaction.iter().enumerate() {
            check_range("coaction", k, *p, d)?;
            check_range("coaction", k, *hh, n)?;
            check_range("coaction", k, *q, d)?;
            coaction[*p].push((hh * d + q, scalar(&field, c, || format!("coaction[{k}]"))?));
        }
        HLBimodule::new(
            l,
            spec.basis.clone(),
            left,
            right,
            coaction.into_iter().map(SparseVec::from_entries).collect(),
        )
    }
}

pub fn map_spec(f: &BialgebraMap, source: Source<HopfSpec>, target: Source<HopfSpec>) -> MapSpec {
    let mut matrix = Vec::new();
    for (col, v) in f.matrix().cols.iter().enumerate() {
        for (row, c) in v.iter() {
            matrix.push((row, col, Lit::from(c)));
        }
    }
    MapSpec {
        name: Some(f.name().to_string()),
        source,
        target,
        matrix,
    }
}

pub fn comodule_spec(l: &ComoduleAlgebra, hopf: Source<HopfSpec>) -> ComoduleSpec {
    let d = l.dim();
    let mut mult = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for (k, c) in l.mul_basis(i, j).iter() {
                mult.push((i, j, k, Lit::from(c)));
            }
        }
    }
    let mut coaction = Vec::new();
    for i in 0..d {
        for (hk, c) in l.coaction_basis(i).iter() {
            coaction.push((i, hk / d, hk % d, Lit::from(c)));
        }
    }
    ComoduleSpec {
        hopf,
        basis: l.labels().to_vec(),
        mult,
        unit: l.unit().iter().map(|(i, c)| (i, Lit::from(c))).collect(),
        coaction,
        exact_asserted: l.exact_asserted,
        indecomposable_asserted: l.indecomposable_asserted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn hopf_round_trip() {
        let h = builtins::taft(3, 2).unwrap();
        let spec = HopfSpec::from_hopf(&h);
        let json = serde_json::to_string(&spec).unwrap();
        let back: HopfSpec = serde_json::from_str(&json).unwrap();
        let h2 = back.build_unchecked().unwrap();
        assert_eq!(h2.fingerprint(), h.to_explicit().unwrap().fingerprint());
    }

    #[test]
    fn integer_coefficients_and_errors() {
        let json = r#"{"field":"rational","dim":1,"basis":["1"],"mult":[[0,0,0,1]],"unit":[[0,"1"]],
            "comult":[[0,0,0,1]],"counit":[[0,1]],"antipode":[[0,0,"1/x"]]}"#;
        let spec: HopfSpec = serde_json::from_str(json).unwrap();
        let err = spec.build_unchecked().unwrap_err().to_string();
        assert!(err.contains("antipode[0]"), "{err}");
    }

    #[test]
    fn descriptor_references() {
        let l = Loader::default();
        let spec = MapSpec {
            name: None,
            source: Source::Ref("k_power(3, 1)".into()),
            target: Source::Ref("uqsl2(3)".into()),
            matrix: vec![(0, 0, Lit("1".into())), (1, 1, Lit("1".into())), (2, 2, Lit("1".into()))],
        };
        let f = l.map_unchecked(&Source::Inline(Box::new(spec))).unwrap();
        assert!(f.verify().all_passed());
        let c = comodule_spec(&ComoduleAlgebra::regular(f.source()), Source::Ref("k_power(3, 1)".into()));
        let l2 = l.comodule(&Source::Inline(Box::new(c))).unwrap();
        assert!(l2.is_regular());
        let p = l.bimodule("regular(regular_comodule(k_power(3, 1)))").unwrap();
        assert_eq!(p.dim(), 3);
    }
}
