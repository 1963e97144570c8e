//! JSON formats. Every number is an exact rational string (`"p/q"` or `"p"`);
//! truncation orders are rationals or `"inf"`.

use std::collections::BTreeMap;

use gns_deform_core::formal_scalar::parse_rational;
use gns_deform_core::functionals::{Functional, FunctionalKind};
use gns_deform_core::gns::{WaveFunction, WickOperator, WickVector};
use gns_deform_core::observables::PiSeries;
use gns_deform_core::{CRational, EnvelopePoly, FormalScalar, Frame, FrameKind, Monomial, Order, Poly, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA: &str = "gns-deform/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("bad frame {0:?}, expected \"weyl\" or \"wick\"")]
    Frame(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] gns_deform_core::Error),
}

fn rational(s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).ok_or_else(|| FormatError::Rational(s.to_string()))
}

pub fn rational_str(r: &Rational) -> String {
    r.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

impl ComplexJson {
    pub fn from_core(c: &CRational) -> Self {
        ComplexJson { re: rational_str(&c.re), im: rational_str(&c.im) }
    }

    pub fn to_core(&self) -> Result<CRational, FormatError> {
        Ok(CRational::new(rational(&self.re)?, rational(&self.im)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarTermJson {
    pub exp: String,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormalScalarJson {
    pub terms: Vec<ScalarTermJson>,
    pub trunc: String,
}

impl FormalScalarJson {
    pub fn from_core(s: &FormalScalar) -> Self {
        let terms = s
            .terms()
            .iter()
            .map(|(e, c)| ScalarTermJson { exp: rational_str(e), re: rational_str(&c.re), im: rational_str(&c.im) })
            .collect();
        let trunc = match s.trunc() {
            Order::Infinite => "inf".to_string(),
            Order::Finite(r) => rational_str(r),
        };
        FormalScalarJson { terms, trunc }
    }

    pub fn to_core(&self) -> Result<FormalScalar, FormatError> {
        let trunc = if self.trunc == "inf" { Order::Infinite } else { Order::Finite(rational(&self.trunc)?) };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((rational(&t.exp)?, CRational::new(rational(&t.re)?, rational(&t.im)?)));
        }
        Ok(FormalScalar::new(terms, trunc))
    }
}

pub fn frame_name(kind: FrameKind) -> &'static str {
    match kind {
        FrameKind::Weyl => "weyl",
        FrameKind::Wick => "wick",
    }
}

pub fn parse_frame_kind(s: &str) -> Result<FrameKind, FormatError> {
    match s {
        "weyl" => Ok(FrameKind::Weyl),
        "wick" => Ok(FrameKind::Wick),
        other => Err(FormatError::Frame(other.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub exps: Vec<u32>,
    pub coeff: FormalScalarJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub frame: String,
    pub n: usize,
    pub terms: Vec<PolyTermJson>,
}

impl PolyJson {
    pub fn from_core(p: &Poly) -> Self {
        let f = p.frame();
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| PolyTermJson { exps: m.0.clone(), coeff: FormalScalarJson::from_core(c) })
            .collect();
        PolyJson { frame: frame_name(f.kind).to_string(), n: f.n, terms }
    }

    pub fn to_core(&self) -> Result<Poly, FormatError> {
        let frame = Frame::new(parse_frame_kind(&self.frame)?, self.n)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exps.len() != frame.vars() {
                return Err(FormatError::Shape(format!("exponent vector must have length {}", frame.vars())));
            }
            terms.push((Monomial(t.exps.clone()), t.coeff.to_core()?));
        }
        Ok(Poly::from_terms(frame, terms)?)
    }
}

fn zero_str() -> String {
    "0".to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeJson {
    #[serde(flatten)]
    pub poly: PolyJson,
    #[serde(default = "zero_str")]
    pub width_q: String,
    #[serde(default = "zero_str")]
    pub width_p: String,
}

impl EnvelopeJson {
    pub fn from_core(e: &EnvelopePoly) -> Self {
        EnvelopeJson {
            poly: PolyJson::from_core(&e.poly),
            width_q: rational_str(&e.width_q),
            width_p: rational_str(&e.width_p),
        }
    }

    pub fn to_core(&self) -> Result<EnvelopePoly, FormatError> {
        Ok(EnvelopePoly::new(self.poly.to_core()?, rational(&self.width_q)?, rational(&self.width_p)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WickTermJson {
    #[serde(rename = "K")]
    pub k: Vec<u32>,
    pub coeff: FormalScalarJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WickVectorJson {
    pub n: usize,
    pub terms: Vec<WickTermJson>,
}

impl WickVectorJson {
    pub fn from_core(v: &WickVector) -> Self {
        let terms = v
            .coeffs()
            .iter()
            .map(|(k, a)| WickTermJson { k: k.clone(), coeff: FormalScalarJson::from_core(a) })
            .collect();
        WickVectorJson { n: v.n, terms }
    }

    pub fn to_core(&self) -> Result<WickVector, FormatError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((t.k.clone(), t.coeff.to_core()?));
        }
        Ok(WickVector::from_coeffs(self.n, terms)?)
    }
}

/// Functional JSON; frame and dimension default to the command context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalJson {
    Delta { point: Vec<ComplexJson> },
    OmegaP0 { p0: Vec<String> },
    OmegaRho { g: EnvelopeJson },
    Trace {},
}

impl FunctionalJson {
    pub fn from_core(f: &Functional) -> Self {
        match &f.kind {
            FunctionalKind::Delta(x) => FunctionalJson::Delta { point: x.iter().map(ComplexJson::from_core).collect() },
            FunctionalKind::OmegaP0(p) => FunctionalJson::OmegaP0 { p0: p.iter().map(rational_str).collect() },
            FunctionalKind::OmegaRho(rho) => FunctionalJson::OmegaRho { g: EnvelopeJson::from_core(rho) },
            FunctionalKind::Trace => FunctionalJson::Trace {},
        }
    }

    pub fn to_core(&self, frame: Frame) -> Result<Functional, FormatError> {
        Ok(match self {
            FunctionalJson::Delta { point } => {
                let pts = point.iter().map(|c| c.to_core()).collect::<Result<Vec<_>, _>>()?;
                Functional::delta(frame, pts)?
            }
            FunctionalJson::OmegaP0 { p0 } => {
                Functional::omega_p0(frame, p0.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?)?
            }
            FunctionalJson::OmegaRho { g } => Functional::omega_rho(&g.to_core()?)?,
            FunctionalJson::Trace {} => Functional::trace(frame)?,
        })
    }
}

pub fn pi_series(v: &PiSeries) -> Value {
    json!({ "value": FormalScalarJson::from_core(&v.value), "pi_half_power": v.pi_half_power })
}

pub fn wave_function(w: &WaveFunction) -> Value {
    serde_json::to_value(EnvelopeJson::from_core(w.as_envelope())).expect("serializable")
}

pub fn wick_operator(op: &WickOperator) -> Value {
    let matrix: Vec<Vec<FormalScalarJson>> =
        op.matrix.iter().map(|row| row.iter().map(FormalScalarJson::from_core).collect()).collect();
    json!({
        "n": op.n,
        "degree": op.cap,
        "basis": op.basis,
        "matrix": matrix,
        "overflow": op.overflow,
    })
}

pub fn scalar(s: &FormalScalar) -> Value {
    serde_json::to_value(FormalScalarJson::from_core(s)).expect("serializable")
}

pub fn poly(p: &Poly) -> Value {
    serde_json::to_value(PolyJson::from_core(p)).expect("serializable")
}

pub fn envelope(e: &EnvelopePoly) -> Value {
    serde_json::to_value(EnvelopeJson::from_core(e)).expect("serializable")
}

pub fn wick_vector(v: &WickVector) -> Value {
    serde_json::to_value(WickVectorJson::from_core(v)).expect("serializable")
}

pub fn complex(c: &CRational) -> Value {
    serde_json::to_value(ComplexJson::from_core(c)).expect("serializable")
}

/// Exact coefficient maps keyed by exponent vectors, e.g. after `λ = ħ`.
pub fn complex_terms(terms: &BTreeMap<Vec<u32>, CRational>, key: &str) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|(k, c)| {
                let mut o = serde_json::Map::new();
                o.insert(key.to_string(), json!(k));
                o.insert("re".into(), json!(rational_str(&c.re)));
                o.insert("im".into(), json!(rational_str(&c.im)));
                Value::Object(o)
            })
            .collect(),
    )
}

/// `{"schema": "gns-deform/1", "command": .., "result": ..}`.
pub fn envelope_output(command: &str, result: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "result": result })
}

pub fn error_output(kind: &str, message: &str, position: Option<usize>) -> Value {
    let mut err = json!({ "kind": kind, "message": message });
    if let Some(p) = position {
        err["position"] = json!(p);
    }
    json!({ "schema": SCHEMA, "error": err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gns_deform_core::formal_scalar::{int, rat};

    #[test]
    fn scalar_roundtrip() {
        let s = FormalScalar::new(
            [(rat(1, 2), CRational::new(int(0), rat(1, 2))), (int(2), CRational::from_int(-3))],
            Order::Finite(int(3)),
        );
        let j = FormalScalarJson::from_core(&s);
        assert_eq!(j.trunc, "3");
        assert_eq!(j.terms[0].im, "1/2");
        let text = serde_json::to_string(&j).unwrap();
        let back: FormalScalarJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_core().unwrap(), s);
        assert_eq!(FormalScalarJson::from_core(&FormalScalar::one()).trunc, "inf");
    }

    #[test]
    fn poly_and_vector_roundtrip() {
        let k = Frame::wick(2);
        let p = &Poly::first(k, 0) * &Poly::second(k, 1);
        assert_eq!(PolyJson::from_core(&p).to_core().unwrap(), p);
        let v = WickVector::basis(&[1, 2]);
        let j = serde_json::to_value(WickVectorJson::from_core(&v)).unwrap();
        assert_eq!(j["terms"][0]["K"], json!([1, 2]));
        let back: WickVectorJson = serde_json::from_value(j).unwrap();
        assert_eq!(back.to_core().unwrap(), v);
    }

    #[test]
    fn functional_tags() {
        let f: FunctionalJson = serde_json::from_str(r#"{"kind":"omega_p0","p0":["0"]}"#).unwrap();
        let w = Frame::weyl(1);
        assert_eq!(f.to_core(w).unwrap(), Functional::omega0(w));
        let t: FunctionalJson = serde_json::from_str(r#"{"kind":"trace"}"#).unwrap();
        assert_eq!(t.to_core(w).unwrap(), Functional::trace(w).unwrap());
        let e = EnvelopeJson::from_core(&EnvelopePoly::with_q_envelope(Poly::one(w), rat(1, 2)).unwrap());
        assert_eq!(serde_json::to_value(&e).unwrap()["width_q"], json!("1/2"));
    }
}
