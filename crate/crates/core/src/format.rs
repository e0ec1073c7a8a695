//! TOML documents for operators, model data and heat-coefficient dumps.
//!
//! Complex entries are `[re, im]` pairs. Each part may be an integer, a float,
//! or a rational string such as `"-3/4"`. Matrices are row-major arrays of entries.

use num::{BigInt, BigRational, Complex, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{word, FormScalar, Mat};
use crate::asymptotics::IndexDensityInput;
use crate::error::{Error, Result};
use crate::graded_ops::{CliffordOperator, MultiIndex, OperatorMonomial};
use crate::heat_jets::HeatCoefficients;
use crate::mehler::ModelData;
use crate::scalar::{rational_to_f64, ExactComplex, Scalar, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

pub type Entry = [Number; 2];
pub type MatrixDoc = Vec<Vec<Entry>>;

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("cannot read {s:?} as a rational"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Number {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            Number::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Number::Float(v) => BigRational::from_float(*v).ok_or_else(|| Error::Format(format!("non-finite number {v}"))),
            Number::Text(s) => parse_rational(s),
        }
    }

    fn to_f64(&self) -> Result<f64> {
        match self {
            Number::Int(v) => Ok(*v as f64),
            Number::Float(v) => Ok(*v),
            Number::Text(s) => Ok(rational_to_f64(&parse_rational(s)?)),
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        if q.denom().is_one() {
            if let Some(v) = q.numer().to_i64() {
                return Number::Int(v);
            }
        }
        Number::Text(format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Scalars that can be written to and read from a document entry.
pub trait DocScalar: Scalar {
    fn to_entry(&self) -> Entry;
    fn from_entry(e: &Entry) -> Result<Self>;
}

impl DocScalar for ExactComplex {
    fn to_entry(&self) -> Entry {
        [Number::from_rational(&self.re), Number::from_rational(&self.im)]
    }

    fn from_entry(e: &Entry) -> Result<Self> {
        Ok(Complex::new(e[0].to_rational()?, e[1].to_rational()?))
    }
}

impl DocScalar for C64 {
    fn to_entry(&self) -> Entry {
        [Number::Float(self.re), Number::Float(self.im)]
    }

    fn from_entry(e: &Entry) -> Result<Self> {
        Ok(C64::new(e[0].to_f64()?, e[1].to_f64()?))
    }
}

pub fn matrix_to_doc<S: DocScalar>(m: &Mat<S>) -> MatrixDoc {
    m.rows().iter().map(|r| r.iter().map(DocScalar::to_entry).collect()).collect()
}

pub fn matrix_from_doc<S: DocScalar>(doc: &MatrixDoc) -> Result<Mat<S>> {
    let dim = doc.len();
    if dim == 0 {
        return Err(Error::Format("empty matrix".into()));
    }
    let mut rows = Vec::with_capacity(dim);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Format(format!("row {i} has {} entries, expected {dim}", row.len())));
        }
        rows.push(row.iter().map(S::from_entry).collect::<Result<Vec<_>>>()?);
    }
    Mat::from_rows(rows).ok_or_else(|| Error::Format("matrix is not square".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialDoc {
    /// x-exponents, one per axis; empty means the unit index.
    #[serde(default)]
    pub x: Vec<u32>,
    /// Clifford word as increasing 1-based axes.
    #[serde(default)]
    pub word: Vec<usize>,
    #[serde(default)]
    pub d: Vec<u32>,
    #[serde(default)]
    pub param: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<MatrixDoc>,
    /// Shorthand for a multiple of the identity twist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub n: usize,
    #[serde(default = "one")]
    pub twist: usize,
    #[serde(default)]
    pub terms: Vec<MonomialDoc>,
}

fn one() -> usize {
    1
}

fn exponents(n: usize, v: &[u32], what: &str, k: usize) -> Result<MultiIndex> {
    match v.len() {
        0 => Ok(MultiIndex::unit(n)),
        len if len == n => Ok(MultiIndex::from_exponents(v.to_vec())),
        len => Err(Error::Format(format!("term {k}: {what} has {len} exponents in dimension {n}"))),
    }
}

fn trim_unit(m: &MultiIndex) -> Vec<u32> {
    if m.is_unit() {
        Vec::new()
    } else {
        m.exponents().to_vec()
    }
}

pub fn operator_to_doc<S: DocScalar>(op: &CliffordOperator<S>) -> OperatorDoc {
    let terms = op
        .monomials()
        .into_iter()
        .map(|m| MonomialDoc {
            x: trim_unit(&m.x),
            word: word::axes(m.word),
            d: trim_unit(&m.d),
            param: m.param,
            coeff: Some(matrix_to_doc(&m.coeff)),
            scalar: None,
        })
        .collect();
    OperatorDoc { n: op.dim(), twist: op.twist(), terms }
}

pub fn operator_from_doc<S: DocScalar>(doc: &OperatorDoc) -> Result<CliffordOperator<S>> {
    let (n, twist) = (doc.n, doc.twist);
    if n == 0 || n > word::MAX_DIM || twist == 0 {
        return Err(Error::Format(format!("need 1 <= n <= {} and twist >= 1", word::MAX_DIM)));
    }
    let mut monos = Vec::with_capacity(doc.terms.len());
    for (k, t) in doc.terms.iter().enumerate() {
        if t.word.windows(2).any(|w| w[0] >= w[1]) || t.word.iter().any(|&a| a == 0 || a > n) {
            return Err(Error::Format(format!("term {k}: word {:?} must be increasing axes in 1..={n}", t.word)));
        }
        let coeff = match (&t.coeff, &t.scalar) {
            (Some(m), None) => matrix_from_doc(m)?,
            (None, Some(s)) => Mat::scalar(twist, S::from_entry(s)?),
            _ => return Err(Error::Format(format!("term {k}: give exactly one of coeff or scalar"))),
        };
        if coeff.dim() != twist {
            return Err(Error::Format(format!("term {k}: coefficient is {0}x{0}, twist is {twist}", coeff.dim())));
        }
        monos.push(OperatorMonomial {
            coeff,
            x: exponents(n, &t.x, "x", k)?,
            word: word::from_axes(&t.word),
            d: exponents(n, &t.d, "d", k)?,
            param: t.param,
        });
    }
    Ok(CliffordOperator::from_monomials(n, twist, monos))
}

pub fn parse_operator<S: DocScalar>(text: &str) -> Result<CliffordOperator<S>> {
    let doc: OperatorDoc = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    operator_from_doc(&doc)
}

pub fn write_operator<S: DocScalar>(op: &CliffordOperator<S>) -> Result<String> {
    toml::to_string(&operator_to_doc(op)).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub r: MatrixDoc,
    pub f: MatrixDoc,
    pub t: f64,
}

impl ModelDoc {
    pub fn from_model(m: &ModelData) -> Self {
        ModelDoc { r: matrix_to_doc(&m.r), f: matrix_to_doc(&m.f), t: m.t }
    }

    pub fn to_model(&self) -> Result<ModelData> {
        ModelData::new(matrix_from_doc(&self.r)?, matrix_from_doc(&self.f)?, self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetTermDoc {
    pub x: Vec<u32>,
    pub param: u32,
    pub word: Vec<usize>,
    pub coeff: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaDoc {
    pub j: usize,
    /// Degree through which the jet is exact; absent for an exact polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid_through: Option<usize>,
    pub terms: Vec<JetTermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatCoefficientsDoc {
    pub n: usize,
    pub thetas: Vec<ThetaDoc>,
}

pub fn heat_coefficients_to_doc<S: DocScalar>(h: &HeatCoefficients<S>) -> HeatCoefficientsDoc {
    let thetas = h
        .thetas
        .iter()
        .enumerate()
        .map(|(j, theta)| ThetaDoc {
            j,
            valid_through: theta.valid_through(),
            terms: theta
                .terms()
                .flat_map(|((x, param), c)| {
                    c.terms().map(move |(w, m)| JetTermDoc {
                        x: trim_unit(x),
                        param: *param,
                        word: word::axes(*w),
                        coeff: matrix_to_doc(m),
                    })
                })
                .collect(),
        })
        .collect();
    HeatCoefficientsDoc { n: h.n, thetas }
}

pub fn write_heat_coefficients<S: DocScalar>(h: &HeatCoefficients<S>) -> Result<String> {
    toml::to_string(&heat_coefficients_to_doc(h)).map_err(|e| Error::Format(e.to_string()))
}

/// A matrix-valued 2-form term `coeff · e^i ∧ e^j` with `1 <= i < j <= n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoFormDoc {
    pub i: usize,
    pub j: usize,
    pub coeff: MatrixDoc,
}

/// Curvature data for the index density: the Riemannian curvature as an `n x n` matrix
/// of 2-forms and the twisting curvature as a `twist x twist` matrix of 2-forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDoc {
    pub n: usize,
    #[serde(default = "one")]
    pub twist: usize,
    #[serde(default)]
    pub curvature: Vec<TwoFormDoc>,
    #[serde(default)]
    pub twist_curvature: Vec<TwoFormDoc>,
}

fn form_matrix(n: usize, size: usize, terms: &[TwoFormDoc], what: &str) -> Result<Mat<FormScalar<ExactComplex>>> {
    let mut out: Mat<FormScalar<ExactComplex>> = Mat::zeros(size);
    for (k, t) in terms.iter().enumerate() {
        if !(1 <= t.i && t.i < t.j && t.j <= n) {
            return Err(Error::Format(format!("{what} term {k}: need 1 <= i < j <= {n}, got ({}, {})", t.i, t.j)));
        }
        let m: Mat<ExactComplex> = matrix_from_doc(&t.coeff)?;
        if m.dim() != size {
            return Err(Error::Format(format!("{what} term {k}: matrix is {0}x{0}, expected {size}x{size}", m.dim())));
        }
        let e = FormScalar::two_form(t.i, t.j);
        for a in 0..size {
            for b in 0..size {
                let v = out.get(a, b).clone() + e.scale(m.get(a, b));
                out.set(a, b, v);
            }
        }
    }
    Ok(out)
}

impl IndexDoc {
    pub fn to_input(&self) -> Result<IndexDensityInput<ExactComplex>> {
        let r = form_matrix(self.n, self.n, &self.curvature, "curvature")?;
        let f = form_matrix(self.n, self.twist, &self.twist_curvature, "twist_curvature")?;
        IndexDensityInput::new(self.n, r, f)
    }
}

pub fn parse_index_input(text: &str) -> Result<IndexDensityInput<ExactComplex>> {
    let doc: IndexDoc = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_input()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordElement;
    use crate::graded_ops::GradingWeights;
    use crate::heat_jets::{dirac_squared, theta_recursion, GeometryJets, TwistCurvature};
    use crate::scalar::{q, qc};

    #[test]
    fn exact_operator_roundtrip() {
        let n = 2;
        let mut fe = TwistCurvature::zero(n, 2);
        fe.set(0, 1, Mat::from_rows(vec![vec![qc((1, 3), (0, 1)), q(0, 1)], vec![q(0, 1), qc((0, 1), (-7, 2))]]).unwrap());
        let op = dirac_squared(&GeometryJets::flat(n, 2).with_twist_connection(&fe), &fe)
            + CliffordOperator::term(
                CliffordElement::generator(n, 2, 1).scale(&q(123456789, 987654321)),
                MultiIndex::axis(n, 2, 3),
                MultiIndex::axis(n, 1, 1),
                2,
            );
        let text = write_operator(&op).unwrap();
        let back: CliffordOperator<ExactComplex> = parse_operator(&text).unwrap();
        assert_eq!(back, op);
        assert_eq!(write_operator(&back).unwrap(), text);
    }

    #[test]
    fn float_operator_roundtrip_is_bit_exact() {
        let r = Mat::from_rows(vec![vec![C64::new(0.0, 0.0), C64::new(0.1, 1.0 / 3.0)], vec![C64::new(-0.1, -1.0 / 3.0), C64::new(0.0, 0.0)]]).unwrap();
        let f = Mat::scalar(1, C64::new(std::f64::consts::PI, -1e-300));
        let m = ModelData::new(r, f, 0.7).unwrap();
        let text = write_operator(&m.operator()).unwrap();
        let back: CliffordOperator<C64> = parse_operator(&text).unwrap();
        assert_eq!(back, m.operator());

        let doc = toml::to_string(&ModelDoc::from_model(&m)).unwrap();
        let read: ModelDoc = toml::from_str(&doc).unwrap();
        assert_eq!(read.to_model().unwrap(), m);
    }

    #[test]
    fn handwritten_operator() {
        let text = r#"
            n = 2
            twist = 1

            [[terms]]
            d = [2, 0]
            scalar = [-1, 0]

            [[terms]]
            d = [0, 2]
            scalar = [-1, 0]

            [[terms]]
            word = [1, 2]
            scalar = ["1/2", 0]
        "#;
        let op: CliffordOperator<ExactComplex> = parse_operator(text).unwrap();
        let expect = CliffordOperator::laplacian(2, 1).scale(&q(-1, 1))
            + CliffordOperator::multiplication(CliffordElement::basis(2, 1, word::from_axes(&[1, 2])).scale(&q(1, 2)));
        assert_eq!(op, expect);
        assert_eq!(op.grading_order(&GradingWeights::CLIFFORD), Some(2));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let cases = [
            "n = 2\n[[terms]]\nx = [1]\nscalar = [1, 0]\n",
            "n = 2\n[[terms]]\nword = [2, 1]\nscalar = [1, 0]\n",
            "n = 2\n[[terms]]\nword = [3]\nscalar = [1, 0]\n",
            "n = 2\n[[terms]]\nscalar = [\"1/0\", 0]\n",
            "n = 2\n[[terms]]\n",
            "n = 2\ntwist = 2\n[[terms]]\ncoeff = [[[1, 0]]]\n",
            "n = \"two\"\n",
        ];
        for text in cases {
            let r: Result<CliffordOperator<ExactComplex>> = parse_operator(text);
            assert!(matches!(r, Err(Error::Format(_))), "{text}");
        }
        let err = parse_operator::<C64>("n = 2\nterms = 5\n").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn heat_coefficient_dump() {
        let v = Mat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(-1, 1)]]).unwrap();
        let d2 = CliffordOperator::laplacian(2, 2).scale(&q(-1, 1)) + CliffordOperator::multiplication(CliffordElement::matrix(2, v));
        let h = theta_recursion(&d2, &GeometryJets::flat(2, 2), 3, 8).unwrap();
        let doc = heat_coefficients_to_doc(&h);
        assert_eq!(doc.thetas.len(), 4);
        assert_eq!(doc.thetas[1].terms.len(), 1);
        assert_eq!(doc.thetas[1].terms[0].coeff[0][1], [Number::Int(-2), Number::Int(0)]);
        let text = write_heat_coefficients(&h).unwrap();
        let back: HeatCoefficientsDoc = toml::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn index_document() {
        let inp = parse_index_input("n = 2\n[[twist_curvature]]\ni = 1\nj = 2\ncoeff = [[[0, \"3/2\"]]]\n").unwrap();
        let top = crate::asymptotics::index_density(&inp).unwrap().top();
        assert_eq!(top.pi_power, -1);
        assert_eq!(top.coeff, qc((0, 1), (1, 2)) * qc((0, 1), (3, 2)));

        for text in [
            "n = 2\n[[twist_curvature]]\ni = 2\nj = 1\ncoeff = [[[1, 0]]]\n",
            "n = 2\n[[curvature]]\ni = 1\nj = 2\ncoeff = [[[1, 0]]]\n",
            "n = 2\ntwist = 2\n[[twist_curvature]]\ni = 1\nj = 3\ncoeff = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]\n",
        ] {
            assert!(matches!(parse_index_input(text), Err(Error::Format(_))), "{text}");
        }
    }
}
