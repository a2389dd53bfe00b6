//! Input documents: one self-describing JSON format for every kind of
//! object the command line accepts. Rationals are strings ("p/q" or an
//! integer), frame and basis indices are 1-based, unknown fields are
//! rejected.

use crate::courant::QuadraticLieAlgebra;
use crate::exterior::ExtElem;
use crate::graded::{GradedVector, GradedVectorSpace};
use crate::linalg::Mat;
use crate::linfty::{GradedSubspace, LInftyAlgebra};
use crate::poly::Polynomial;
use crate::rat::{zero, Rat};
use crate::stability::{FixedPointGerm, LieAlgebra};
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("index {0} out of range 1..={1}")]
    IndexRange(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

/// Parses "p/q" or an integer string; zero denominators are rejected
/// rather than panicking inside the rational library.
pub fn parse_rat(s: &str) -> Result<Rat, DocError> {
    let bad = || DocError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if d == num_bigint::BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn parse_vec(row: &[String]) -> Result<Vec<Rat>, DocError> {
    row.iter().map(|s| parse_rat(s)).collect()
}

fn parse_mat(rows: &[Vec<String>]) -> Result<Mat, DocError> {
    let parsed: Result<Vec<Vec<Rat>>, _> = rows.iter().map(|r| parse_vec(r)).collect();
    Ok(Mat::from_rows(parsed?))
}

fn index0(i: usize, n: usize) -> Result<usize, DocError> {
    if i == 0 || i > n {
        return Err(DocError::IndexRange(i, n));
    }
    Ok(i - 1)
}

fn word0(w: &[usize], n: usize) -> Result<Vec<u8>, DocError> {
    w.iter().map(|&i| Ok(index0(i, n)? as u8)).collect()
}

/// A polynomial as a list of monomials: [[exponent tuple], "p/q"].
pub type PolyDoc = Vec<(Vec<u32>, String)>;

fn parse_poly(p: &PolyDoc, base_dim: usize) -> Result<Polynomial, DocError> {
    let mut out = Polynomial::zero();
    for (exps, c) in p {
        if exps.len() > base_dim {
            return Err(DocError::Invalid(format!(
                "monomial with {} exponents in a {}-variable base",
                exps.len(),
                base_dim
            )));
        }
        out.add_monomial(exps.clone(), parse_rat(c)?);
    }
    Ok(out)
}

/// Structure constants as triple lists [i, j, k, "p/q"] with i < j;
/// the reversed entry is implied by antisymmetry.
pub type StructEntry = (usize, usize, usize, String);

fn parse_structure(
    entries: &[StructEntry],
    dim: usize,
) -> Result<Vec<(usize, usize, Vec<Rat>)>, DocError> {
    let mut by_pair: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
    for (i, j, k, c) in entries {
        let (i, j, k) = (index0(*i, dim)?, index0(*j, dim)?, index0(*k, dim)?);
        if i >= j {
            return Err(DocError::Invalid(format!(
                "structure entries must have i < j, got [{}, {}]",
                i + 1,
                j + 1
            )));
        }
        by_pair.entry((i, j)).or_insert_with(|| vec![zero(); dim])[k] += parse_rat(c)?;
    }
    Ok(by_pair.into_iter().map(|((i, j), v)| (i, j, v)).collect())
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDocument {
    Linfty(LinftyDoc),
    QuadraticLie(QuadraticLieDoc),
    DiracSplit(DiracSplitDoc),
    PolyAlgebroid(PolyAlgebroidDoc),
    Germ(GermDoc),
    CartanDirac(CartanDiracDoc),
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            InputDocument::Linfty(_) => "linfty",
            InputDocument::QuadraticLie(_) => "quadratic_lie",
            InputDocument::DiracSplit(_) => "dirac_split",
            InputDocument::PolyAlgebroid(_) => "poly_algebroid",
            InputDocument::Germ(_) => "germ",
            InputDocument::CartanDirac(_) => "cartan_dirac",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedVector {
    pub name: String,
    /// Sparse coefficients: label -> rational.
    pub coeffs: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSubspace {
    pub name: String,
    /// Names of elements spanning the subspace.
    pub members: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinftyDoc {
    pub basis: Vec<BasisEntry>,
    pub k_max: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub elements: Vec<NamedVector>,
    #[serde(default)]
    pub subalgebras: Vec<NamedSubspace>,
}

pub struct LinftyData {
    pub alg: LInftyAlgebra,
    pub elements: BTreeMap<String, GradedVector>,
    pub subalgebras: BTreeMap<String, GradedSubspace>,
}

impl LinftyDoc {
    pub fn build(&self) -> Result<LinftyData, DocError> {
        let mut by_degree: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for b in &self.basis {
            by_degree.entry(b.degree).or_default().push(b.label.clone());
        }
        let pairs: Vec<(i32, Vec<String>)> = by_degree.into_iter().collect();
        let space = GradedVectorSpace::new(&pairs)
            .map_err(|e| DocError::Invalid(e.to_string()))?;
        let mut alg = LInftyAlgebra::new(space, self.k_max);
        for t in &self.brackets {
            let labels: Result<Vec<u32>, _> = t
                .inputs
                .iter()
                .map(|l| alg.space.lookup(l).map_err(|e| DocError::Invalid(e.to_string())))
                .collect();
            let out = alg
                .space
                .lookup(&t.output)
                .map_err(|e| DocError::Invalid(e.to_string()))?;
            let mut v = GradedVector::zero();
            v.add_term(out, parse_rat(&t.coeff)?);
            alg.add_bracket_term(&labels?, &v)
                .map_err(|e| DocError::Invalid(e.to_string()))?;
        }
        let mut elements = BTreeMap::new();
        for e in &self.elements {
            let mut v = GradedVector::zero();
            for (l, c) in &e.coeffs {
                let idx = alg
                    .space
                    .lookup(l)
                    .map_err(|e| DocError::Invalid(e.to_string()))?;
                v.add_term(idx, parse_rat(c)?);
            }
            elements.insert(e.name.clone(), v);
        }
        let mut subalgebras = BTreeMap::new();
        for s in &self.subalgebras {
            let span: Result<Vec<GradedVector>, DocError> = s
                .members
                .iter()
                .map(|m| {
                    elements
                        .get(m)
                        .cloned()
                        .ok_or_else(|| DocError::Invalid(format!("unknown element `{m}`")))
                })
                .collect();
            let w = GradedSubspace::new(&alg.space, &span?)
                .map_err(|e| DocError::Invalid(e.to_string()))?;
            subalgebras.insert(s.name.clone(), w);
        }
        Ok(LinftyData {
            alg,
            elements,
            subalgebras,
        })
    }
}

/// A 3-form term: [[i, j, k], "p/q"] with 1-based strictly increasing
/// indices; general exterior words share the shape.
pub type FormEntry = (Vec<usize>, String);

fn parse_form(entries: &[FormEntry], n: usize) -> Result<ExtElem<Rat>, DocError> {
    let mut out = ExtElem::zero(n);
    for (w, c) in entries {
        out.add_term(word0(w, n)?, parse_rat(c)?);
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedBasis {
    pub name: String,
    pub basis: Vec<Vec<String>>,
}

/// A quadratic Lie algebra given directly (bracket + pairing), as a
/// plain Lie algebra (no pairing), or as a Lie algebra with a closed
/// 3-form twist (its twisted double is built).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticLieDoc {
    pub dim: usize,
    #[serde(default)]
    pub bracket: Vec<StructEntry>,
    #[serde(default)]
    pub pairing: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub twist: Option<Vec<FormEntry>>,
    #[serde(default)]
    pub dirac: Vec<NamedBasis>,
}

impl QuadraticLieDoc {
    pub fn lie_algebra(&self) -> Result<LieAlgebra, DocError> {
        let entries = parse_structure(&self.bracket, self.dim)?;
        LieAlgebra::new(self.dim, &entries).map_err(|e| DocError::Invalid(e.to_string()))
    }

    /// The ambient quadratic Lie algebra this document denotes.
    pub fn ambient(&self) -> Result<QuadraticLieAlgebra, DocError> {
        match (&self.pairing, &self.twist) {
            (Some(_), Some(_)) => Err(DocError::Invalid(
                "give either a pairing (direct quadratic data) or a twist (double), not both"
                    .into(),
            )),
            (Some(p), None) => {
                let pairing = parse_mat(p)?;
                if pairing.rows != self.dim || pairing.cols != self.dim {
                    return Err(DocError::Invalid("pairing shape mismatch".into()));
                }
                let mut bracket = vec![vec![vec![zero(); self.dim]; self.dim]; self.dim];
                for (i, j, v) in parse_structure(&self.bracket, self.dim)? {
                    for (k, c) in v.iter().enumerate() {
                        bracket[i][j][k] += c;
                        bracket[j][i][k] -= c;
                    }
                }
                Ok(QuadraticLieAlgebra::new(bracket, pairing))
            }
            (None, Some(h)) => {
                let g = self.lie_algebra()?;
                let hform = parse_form(h, self.dim)?;
                crate::courant::build_twisted_double(&g, &hform)
                    .map_err(|e| DocError::Invalid(e.to_string()))
            }
            (None, None) => Err(DocError::Invalid(
                "quadratic data needs a pairing or a twist".into(),
            )),
        }
    }

    pub fn dirac_bases(&self) -> Result<Vec<(String, Vec<Vec<Rat>>)>, DocError> {
        self.dirac
            .iter()
            .map(|d| {
                let rows: Result<Vec<Vec<Rat>>, _> = d.basis.iter().map(|r| parse_vec(r)).collect();
                Ok((d.name.clone(), rows?))
            })
            .collect()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedForm {
    pub name: String,
    /// Exterior words over the Dirac frame (1-based), with coefficients.
    pub terms: Vec<FormEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracSplitDoc {
    pub ambient: QuadraticLieDoc,
    /// Basis of the Dirac subspace in ambient coordinates.
    pub dirac: Vec<Vec<String>>,
    #[serde(default)]
    pub complement: Option<Vec<Vec<String>>>,
    /// Named elements of the deformation algebra (forms over the Dirac
    /// frame), used by flow and cohomology.
    #[serde(default)]
    pub elements: Vec<NamedForm>,
}

impl DiracSplitDoc {
    pub fn dirac_basis(&self) -> Result<Vec<Vec<Rat>>, DocError> {
        self.dirac.iter().map(|r| parse_vec(r)).collect()
    }

    pub fn complement_basis(&self) -> Result<Option<Vec<Vec<Rat>>>, DocError> {
        match &self.complement {
            None => Ok(None),
            Some(rows) => Ok(Some(
                rows.iter().map(|r| parse_vec(r)).collect::<Result<_, _>>()?,
            )),
        }
    }

    pub fn element(&self, name: &str) -> Result<ExtElem<Rat>, DocError> {
        let n = self.dirac.len();
        let f = self
            .elements
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| DocError::Invalid(format!("unknown element `{name}`")))?;
        parse_form(&f.terms, n)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyAlgebroidDoc {
    pub base_dim: usize,
    pub rank: usize,
    /// rank x base_dim table of anchor coefficient polynomials.
    pub anchor: Vec<Vec<PolyDoc>>,
    #[serde(default)]
    pub structure: Vec<(usize, usize, usize, PolyDoc)>,
    #[serde(default)]
    pub pi: Vec<(Vec<usize>, PolyDoc)>,
    #[serde(default)]
    pub twist: Vec<(Vec<usize>, PolyDoc)>,
    #[serde(default)]
    pub point: Option<Vec<String>>,
}

pub struct PolyAlgebroidData {
    pub algebroid: crate::algebroid::PolyLieAlgebroid,
    pub pi: crate::algebroid::PolySection,
    pub twist: crate::algebroid::PolySection,
    pub point: Option<Vec<Rat>>,
}

impl PolyAlgebroidDoc {
    pub fn build(&self) -> Result<PolyAlgebroidData, DocError> {
        let (m, r) = (self.base_dim, self.rank);
        if self.anchor.len() != r || self.anchor.iter().any(|row| row.len() != m) {
            return Err(DocError::Invalid("anchor shape must be rank x base_dim".into()));
        }
        let anchor: Result<Vec<Vec<Polynomial>>, DocError> = self
            .anchor
            .iter()
            .map(|row| row.iter().map(|p| parse_poly(p, m)).collect())
            .collect();
        let mut c = vec![vec![vec![Polynomial::zero(); r]; r]; r];
        for (i, j, k, p) in &self.structure {
            let (i, j, k) = (index0(*i, r)?, index0(*j, r)?, index0(*k, r)?);
            if i >= j {
                return Err(DocError::Invalid("structure entries must have i < j".into()));
            }
            let f = parse_poly(p, m)?;
            c[i][j][k] = c[i][j][k].clone() + f.clone();
            c[j][i][k] = c[j][i][k].clone() - f;
        }
        let parse_section = |entries: &[(Vec<usize>, PolyDoc)]| -> Result<_, DocError> {
            let mut s = crate::algebroid::PolySection::zero(r);
            for (w, p) in entries {
                s.add_term(word0(w, r)?, parse_poly(p, m)?);
            }
            Ok(s)
        };
        let point = match &self.point {
            None => None,
            Some(p) => {
                if p.len() != m {
                    return Err(DocError::Invalid("point dimension mismatch".into()));
                }
                Some(parse_vec(p)?)
            }
        };
        Ok(PolyAlgebroidData {
            algebroid: crate::algebroid::PolyLieAlgebroid::new(m, r, anchor?, c),
            pi: parse_section(&self.pi)?,
            twist: parse_section(&self.twist)?,
            point,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermDoc {
    pub dim_e: usize,
    pub pairing: Vec<Vec<String>>,
    pub a_basis: Vec<Vec<String>>,
    /// Bracket on A in a_basis coordinates, triples with i < j.
    #[serde(default)]
    pub bracket: Vec<StructEntry>,
    pub ker_rho: Vec<Vec<String>>,
}

impl GermDoc {
    pub fn build(&self) -> Result<FixedPointGerm, DocError> {
        let pairing = parse_mat(&self.pairing)?;
        if pairing.rows != self.dim_e || pairing.cols != self.dim_e {
            return Err(DocError::Invalid("pairing shape mismatch".into()));
        }
        let a_basis: Vec<Vec<Rat>> = self
            .a_basis
            .iter()
            .map(|r| parse_vec(r))
            .collect::<Result<_, _>>()?;
        let entries = parse_structure(&self.bracket, a_basis.len())?;
        let algebra = LieAlgebra::new(a_basis.len(), &entries)
            .map_err(|e| DocError::Invalid(e.to_string()))?;
        let ker_rho: Vec<Vec<Rat>> = self
            .ker_rho
            .iter()
            .map(|r| parse_vec(r))
            .collect::<Result<_, _>>()?;
        FixedPointGerm::new(pairing, a_basis, algebra, ker_rho)
            .map_err(|e| DocError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanDiracDoc {
    pub dim: usize,
    pub bracket: Vec<StructEntry>,
    pub metric: Vec<Vec<String>>,
}

impl CartanDiracDoc {
    pub fn build(&self) -> Result<(LieAlgebra, Mat), DocError> {
        let entries = parse_structure(&self.bracket, self.dim)?;
        let g = LieAlgebra::new(self.dim, &entries)
            .map_err(|e| DocError::Invalid(e.to_string()))?;
        let metric = parse_mat(&self.metric)?;
        if metric.rows != self.dim || metric.cols != self.dim {
            return Err(DocError::Invalid("metric shape mismatch".into()));
        }
        Ok((g, metric))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{one, rat};

    #[test]
    fn rationals_parse_and_reject_zero_denominator() {
        assert_eq!(parse_rat("3").unwrap(), rat(3));
        assert_eq!(parse_rat("-1/2").unwrap(), Rat::new((-1).into(), 2.into()));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"kind": "cartan_dirac", "dim": 1, "bracket": [], "metric": [["1"]], "extra": 0}"#;
        assert!(InputDocument::from_json(text).is_err());
        let text = r#"{"kind": "cartan_dirac", "dim": 1, "bracket": [], "metric": [["1"]]}"#;
        assert!(InputDocument::from_json(text).is_ok());
    }

    #[test]
    fn indices_are_one_based_and_checked() {
        let doc = QuadraticLieDoc {
            dim: 2,
            bracket: vec![(1, 2, 3, "1".into())],
            pairing: None,
            twist: None,
            dirac: vec![],
        };
        assert!(matches!(doc.lie_algebra(), Err(DocError::IndexRange(3, 2))));
    }

    #[test]
    fn twisted_double_document_builds() {
        let text = r#"{
            "kind": "quadratic_lie",
            "dim": 3,
            "bracket": [[1, 2, 3, "1"], [2, 3, 1, "1"], [1, 3, 2, "-1"]],
            "twist": [[[1, 2, 3], "1"]]
        }"#;
        let InputDocument::QuadraticLie(doc) = InputDocument::from_json(text).unwrap() else {
            panic!("kind");
        };
        let e = doc.ambient().unwrap();
        assert_eq!(e.dim, 6);
        assert!(crate::courant::check_courant_axioms(&e).passed());
    }

    #[test]
    fn poly_algebroid_document_builds() {
        let text = r#"{
            "kind": "poly_algebroid",
            "base_dim": 2,
            "rank": 2,
            "anchor": [
                [[[[1], "1"]], []],
                [[], [[[0, 1], "1"]]]
            ],
            "pi": [[[1, 2], [[[], "1"]]]],
            "point": ["0", "0"]
        }"#;
        let InputDocument::PolyAlgebroid(doc) = InputDocument::from_json(text).unwrap() else {
            panic!("kind");
        };
        let data = doc.build().unwrap();
        assert_eq!(data.algebroid.rank, 2);
        assert_eq!(data.pi.terms.len(), 1);
        assert_eq!(data.point, Some(vec![zero(), zero()]));
        let _ = one();
    }
}
