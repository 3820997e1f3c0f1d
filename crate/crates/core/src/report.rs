//! Problem and certificate files, and the pipeline that turns one into the
//! other. Rationals are written as strings (`"3/4"`, `"-2"`); integer JSON
//! numbers are accepted on input.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::avi::{check_generalized_critical_face, AviProblem, Necessity};
use crate::error::{Error, Result};
use crate::geometry::{Cone, PolyhedronH};
use crate::lcp::{self, LipschitzCertificate, ModulusOptions};
use crate::linalg::{fmt_rational, parse_rational, RMatrix, RVector, Rational};
use crate::oracle::{self, RefinementProfile, Region, SamplingPlan, REFINEMENTS};

pub const TOOL: &str = concat!("stabcert ", env!("CARGO_PKG_VERSION"));

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Text(String),
    Int(i64),
}

impl RawRational {
    fn parse<E: serde::de::Error>(self) -> std::result::Result<Rational, E> {
        match self {
            RawRational::Text(s) => parse_rational(&s).map_err(E::custom),
            RawRational::Int(i) => Ok(Rational::from_integer(i.into())),
        }
    }
}

struct Text<'a>(&'a Rational);

impl Serialize for Text<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(self.0))
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        Text(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RawRational::deserialize(d)?.parse()
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Text))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RVector, D::Error> {
        Vec::<RawRational>::deserialize(d)?.into_iter().map(RawRational::parse).collect()
    }
}

pub mod opt_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<RVector>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::rational_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<RVector>, D::Error> {
        Option::<Vec<RawRational>>::deserialize(d)?
            .map(|v| v.into_iter().map(RawRational::parse).collect())
            .transpose()
    }
}

/// Row-major nested arrays.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[RVector], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| r.iter().map(Text).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RVector>, D::Error> {
        Vec::<Vec<RawRational>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(RawRational::parse).collect())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawModulus {
    Finite(f64),
    Text(String),
}

/// A modulus value; `+∞` is written as `"inf"`.
pub mod modulus_value {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match RawModulus::deserialize(d)? {
            RawModulus::Finite(v) => Ok(v),
            RawModulus::Text(t) if t == "inf" => Ok(f64::INFINITY),
            RawModulus::Text(t) => Err(serde::de::Error::custom(format!("bad modulus {t:?}"))),
        }
    }
}

pub mod opt_modulus {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::modulus_value::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        match Option::<RawModulus>::deserialize(d)? {
            None => Ok(None),
            Some(RawModulus::Finite(v)) => Ok(Some(v)),
            Some(RawModulus::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(RawModulus::Text(t)) => Err(serde::de::Error::custom(format!("bad modulus {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Lcp,
    Avi,
}

/// `{x : a_le x <= b_le, a_eq x = b_eq}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HRepFile {
    #[serde(with = "matrix")]
    pub a_le: Vec<RVector>,
    #[serde(with = "rational_vec")]
    pub b_le: RVector,
    #[serde(default, with = "matrix", skip_serializing_if = "Vec::is_empty")]
    pub a_eq: Vec<RVector>,
    #[serde(default, with = "rational_vec", skip_serializing_if = "Vec::is_empty")]
    pub b_eq: RVector,
}

impl HRepFile {
    pub fn to_polyhedron(&self, n: usize, what: &str) -> Result<PolyhedronH> {
        let mat = |rows: &[RVector]| -> Result<RMatrix> {
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("{what}: rows must have length {n}")));
            }
            if rows.is_empty() {
                Ok(RMatrix::empty(n))
            } else {
                RMatrix::from_rows(rows.to_vec())
            }
        };
        PolyhedronH::new(mat(&self.a_le)?, self.b_le.clone(), mat(&self.a_eq)?, self.b_eq.clone())
            .map_err(|e| Error::Dimension(format!("{what}: {e}")))
    }

    pub fn from_polyhedron(p: &PolyhedronH) -> Self {
        Self {
            a_le: p.a_le.row_vecs(),
            b_le: p.b_le.clone(),
            a_eq: p.a_eq.row_vecs(),
            b_eq: p.b_eq.clone(),
        }
    }
}

/// Either an explicit polyhedron or the `"domain"` sentinel for `dom S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QSetFile {
    Domain,
    Set(HRepFile),
}

impl Serialize for QSetFile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QSetFile::Domain => s.serialize_str("domain"),
            QSetFile::Set(h) => h.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for QSetFile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Sentinel(String),
            Set(HRepFile),
        }
        match Raw::deserialize(d)? {
            Raw::Sentinel(s) if s == "domain" => Ok(QSetFile::Domain),
            Raw::Sentinel(s) => Err(serde::de::Error::custom(format!("unknown q_set sentinel {s:?}"))),
            Raw::Set(h) => Ok(QSetFile::Set(h)),
        }
    }
}

fn default_starts() -> usize {
    64
}

fn default_tol() -> f64 {
    1e-6
}

fn default_q0_samples() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_q0_samples")]
    pub q0_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SamplingPlan>,
}

impl Default for Options {
    fn default() -> Self {
        Self { starts: default_starts(), tol: default_tol(), seed: 0, q0_samples: default_q0_samples(), oracle: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    #[serde(with = "matrix")]
    pub m: Vec<RVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<HRepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_set: Option<QSetFile>,
    #[serde(with = "rational_vec")]
    pub q_bar: RVector,
    #[serde(default, with = "opt_rational_vec", skip_serializing_if = "Option::is_none")]
    pub x_bar: Option<RVector>,
    #[serde(default)]
    pub options: Options,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub m: RMatrix,
    /// `None` for the LCP cone `R^n_+`.
    pub c: Option<PolyhedronH>,
    /// `None` for `dom S`.
    pub q_set: Option<PolyhedronH>,
    pub q_bar: RVector,
    pub x_bar: Option<RVector>,
    pub options: Options,
}

impl Problem {
    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn x_bar(&self) -> Result<&RVector> {
        self.x_bar.as_ref().ok_or_else(|| Error::Dimension("x_bar is required for this command".into()))
    }

    pub fn c_or_orthant(&self) -> PolyhedronH {
        self.c.clone().unwrap_or_else(|| PolyhedronH::orthant(self.dim()))
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Dimension(format!("malformed problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn validate(&self) -> Result<Problem> {
        let m = RMatrix::from_rows(self.m.clone())?;
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::Dimension(format!("m is {}x{}, expected nonempty square", m.rows(), m.cols())));
        }
        let n = m.rows();
        let c = match (self.kind, &self.c) {
            (Kind::Lcp, None) => None,
            (Kind::Lcp, Some(_)) => return Err(Error::Dimension("an lcp problem takes no c".into())),
            (Kind::Avi, None) => return Err(Error::Dimension("an avi problem needs c".into())),
            (Kind::Avi, Some(h)) => Some(h.to_polyhedron(n, "c")?),
        };
        let q_set = match self.q_set.as_ref().unwrap_or(&QSetFile::Domain) {
            QSetFile::Domain if c.is_some() => {
                return Err(Error::Dimension(
                    "the domain sentinel selects the lcp certificate and cannot be combined with c".into(),
                ))
            }
            QSetFile::Domain => None,
            QSetFile::Set(h) => Some(h.to_polyhedron(n, "q_set")?),
        };
        for (v, name) in [(Some(&self.q_bar), "q_bar"), (self.x_bar.as_ref(), "x_bar")] {
            if let Some(v) = v {
                if v.len() != n {
                    return Err(Error::Dimension(format!("{name} has length {}, expected {n}", v.len())));
                }
            }
        }
        if let Some(plan) = &self.options.oracle {
            plan.validate()?;
        }
        if !(self.options.tol > 0.0) || self.options.starts == 0 {
            return Err(Error::Dimension("options need starts >= 1 and tol > 0".into()));
        }
        Ok(Problem {
            m,
            c,
            q_set,
            q_bar: self.q_bar.clone(),
            x_bar: self.x_bar.clone(),
            options: self.options.clone(),
        })
    }
}

/// A cone by its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFile {
    #[serde(with = "matrix")]
    pub rays: Vec<RVector>,
    #[serde(with = "matrix")]
    pub lineality: Vec<RVector>,
}

impl From<&Cone> for ConeFile {
    fn from(c: &Cone) -> Self {
        Self { rays: c.rays().to_vec(), lineality: c.lineality().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePairTrace {
    pub f1: ConeFile,
    pub f2: ConeFile,
}

/// Face-pair trace of the critical face check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AviTrace {
    pub cq_holds: bool,
    pub condition_holds: bool,
    pub pairs_checked: usize,
    pub critical_cone: ConeFile,
    pub failing_pair: Option<FacePairTrace>,
    #[serde(with = "opt_rational_vec")]
    pub witness_ray: Option<RVector>,
    #[serde(with = "opt_rational_vec")]
    pub cq_witness: Option<RVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Index-combination certificate relative to `dom S`.
    LcpDomain,
    /// Generalized critical face condition relative to an explicit `Q`.
    AviCriticalFace,
}

/// Sampling cross-check of an exact verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub plan: SamplingPlan,
    /// Brute-force solutions at `q_bar` match the exact solver.
    pub solutions_agree: bool,
    pub refinement: RefinementProfile,
    pub isc: bool,
    /// `!divergent` equals the exact verdict (absent for inconclusive verdicts).
    pub agrees_with_verdict: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub tool: String,
    pub problem: ProblemFile,
    pub route: Route,
    /// `null` when neither the sufficient nor the necessary part applies.
    pub verdict: Option<bool>,
    pub necessity: Necessity,
    #[serde(with = "opt_rational_vec")]
    pub witness: Option<RVector>,
    #[serde(with = "opt_modulus")]
    pub modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lcp: Option<LipschitzCertificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub avi: Option<AviTrace>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleReport>,
    /// Wall time; the only field allowed to differ between reruns.
    pub timing_ms: u64,
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// What the caller asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Request {
    /// `dom S` only.
    Lcp,
    /// Explicit `Q`, or `dom S` through the lcp route.
    Avi,
}

/// Runs the certificate for `file`; `oracle` forces the cross-check block
/// (with the default plan unless the file has one). `timing_ms` is left 0.
pub fn certify(file: &ProblemFile, request: Request, oracle: bool) -> Result<CertificateFile> {
    let p = file.validate()?;
    let x_bar = p.x_bar()?.clone();
    let plan = match (&p.options.oracle, oracle) {
        (Some(plan), _) => Some(plan.clone()),
        (None, true) => Some(SamplingPlan { seed: p.options.seed, ..SamplingPlan::default() }),
        (None, false) => None,
    };
    let mut cert = match (&p.q_set, request) {
        (None, _) => certify_lcp(file, &p, &x_bar)?,
        (Some(_), Request::Lcp) => {
            return Err(Error::Dimension("check-lcp works relative to dom S; use check-avi for an explicit q_set".into()))
        }
        (Some(q), Request::Avi) => certify_avi(file, &p, q, &x_bar)?,
    };
    if let Some(plan) = plan {
        if p.c.is_none() {
            cert.oracle = Some(cross_check(&p, &x_bar, plan, cert.verdict)?);
        }
    }
    Ok(cert)
}

fn certify_lcp(file: &ProblemFile, p: &Problem, x_bar: &[Rational]) -> Result<CertificateFile> {
    let q0 = lcp::is_q0(&p.m, p.options.q0_samples, p.options.seed)?;
    let mut lc = lcp::check_lipschitz_domain(&p.m, &p.q_bar, x_bar, &q0)?;
    if lc.verdict {
        let opts = ModulusOptions { starts: p.options.starts, tol: p.options.tol, seed: p.options.seed };
        let (value, diag) = lcp::modulus(&p.m, &p.q_bar, x_bar, &lc, &opts)?;
        lc.modulus = Some(value);
        lc.modulus_diagnostics = Some(diag);
    }
    Ok(CertificateFile {
        tool: TOOL.into(),
        problem: file.clone(),
        route: Route::LcpDomain,
        verdict: Some(lc.verdict),
        necessity: Necessity::SufficientAndNecessary,
        witness: lc.witness.clone(),
        modulus: lc.modulus,
        lcp: Some(lc),
        avi: None,
        oracle: None,
        timing_ms: 0,
    })
}

fn certify_avi(file: &ProblemFile, p: &Problem, q: &PolyhedronH, x_bar: &[Rational]) -> Result<CertificateFile> {
    let problem = AviProblem::new(p.m.clone(), p.c_or_orthant(), q.clone())?;
    let v = check_generalized_critical_face(&problem, &p.q_bar, x_bar)?;
    let verdict = v.lipschitz_like(false);
    let trace = AviTrace {
        cq_holds: v.cq_holds,
        condition_holds: v.condition_holds,
        pairs_checked: v.pairs_checked,
        critical_cone: (&v.critical_cone).into(),
        failing_pair: v.failing_pair.as_ref().map(|fp| FacePairTrace { f1: (&fp.f1).into(), f2: (&fp.f2).into() }),
        witness_ray: v.witness_ray.clone(),
        cq_witness: v.cq_witness.clone(),
    };
    Ok(CertificateFile {
        tool: TOOL.into(),
        problem: file.clone(),
        route: Route::AviCriticalFace,
        verdict,
        necessity: v.necessity,
        witness: v.witness_ray.clone().or(v.cq_witness.clone()),
        modulus: (verdict == Some(false)).then_some(f64::INFINITY),
        lcp: None,
        avi: Some(trace),
        oracle: None,
        timing_ms: 0,
    })
}

fn cross_check(p: &Problem, x_bar: &[Rational], plan: SamplingPlan, verdict: Option<bool>) -> Result<OracleReport> {
    let region = match &p.q_set {
        Some(q) => Region::Polyhedron(q.clone()),
        None => Region::Cone(lcp::domain_cone(&p.m)),
    };
    let exact = lcp::solve_lcp(&p.m, &p.q_bar)?;
    let brute = oracle::brute_solutions(&p.m, &p.q_bar);
    let refinement = oracle::refine(&p.m, &region, &p.q_bar, x_bar, &plan, REFINEMENTS)?;
    let isc = oracle::sample_isc(&p.m, &region, &p.q_bar, x_bar, &plan)?;
    Ok(OracleReport {
        solutions_agree: oracle::same_solutions(&exact, &brute),
        agrees_with_verdict: verdict.map(|v| v != refinement.divergent),
        refinement,
        isc,
        plan,
    })
}
