//! Sparse multivariate polynomials over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{format_rational, parse_rational, Field};
use super::ArithError;

/// Exponent vector of a monomial. Terms are kept in lexicographic order of
/// these vectors, which is a monomial order.
pub type Monomial = Vec<u32>;

/// A polynomial in a fixed, named list of variables.
///
/// All binary operations require both operands to share the same variable
/// list; mixing lists is a programming error and panics.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<F: Field> {
    field: F,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms.iter().rev() {
            let c = self.field.to_rational(c);
            let mut s = format_rational(&c);
            if !first && !s.starts_with('-') {
                s.insert(0, '+');
            }
            first = false;
            let mut mono = String::new();
            for (v, &e) in self.vars.iter().zip(exp) {
                match e {
                    0 => {}
                    1 => mono.push_str(&format!("*{v}")),
                    _ => mono.push_str(&format!("*{v}^{e}")),
                }
            }
            write!(f, "{s}{mono}")?;
        }
        Ok(())
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, vars: Arc<Vec<String>>) -> Self {
        MultiPoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, vars: Arc<Vec<String>>, c: F::Elem) -> Self {
        let mut p = Self::zero(field, vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(field: F, vars: Arc<Vec<String>>) -> Self {
        let one = field.one();
        Self::constant(field, vars, one)
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(field: F, vars: Arc<Vec<String>>, i: usize) -> Self {
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        let one = field.one();
        let mut p = Self::zero(field, vars);
        p.add_term(exp, one);
        p
    }

    pub fn from_terms(
        field: F,
        vars: Arc<Vec<String>>,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> F::Elem {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Largest term in lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exp: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                let s = self.field.add(old, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&exp);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        if self.field.is_zero(s) {
            return Self::zero(self.field.clone(), self.vars.clone());
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.mul(c, s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.field.clone(), self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_term(&self, exp: &[u32], c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.vars.clone());
        if self.field.is_zero(c) {
            return out;
        }
        for (e1, c1) in &self.terms {
            let e: Monomial = e1.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.terms.insert(e, self.field.mul(c1, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.vars.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the given subset of variables.
    pub fn degree_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|&i| e[i]).sum())
            .max()
    }

    /// True when every term has the same degree in `vars`.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|e| vars.iter().map(|&i| e[i]).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.vars.len());
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Exact quotient `self / den`; fails unless `den` divides `self`.
    pub fn exact_divide(&self, den: &Self) -> Result<Self, ArithError> {
        self.check_compatible(den);
        let (lm, lc) = match den.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(ArithError::DivisionByZero),
        };
        let f = &self.field;
        let lc_inv = f.inv(&lc).ok_or(ArithError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quo = Self::zero(f.clone(), self.vars.clone());
        while let Some((rm, rc)) = rem.leading_term() {
            if rm.iter().zip(&lm).any(|(a, b)| a < b) {
                return Err(ArithError::NotDivisible);
            }
            let qm: Monomial = rm.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = f.mul(rc, &lc_inv);
            rem = rem.sub(&den.mul_term(&qm, &qc));
            quo.add_term(qm, qc);
        }
        Ok(quo)
    }

    /// Terms of minimal weighted degree, the initial form in direction `weights`.
    pub fn initial_form(&self, weights: &[BigRational]) -> Self {
        assert_eq!(weights.len(), self.vars.len());
        let wdeg = |e: &Monomial| -> BigRational {
            e.iter()
                .zip(weights)
                .map(|(&k, w)| w * BigRational::from_integer(k.into()))
                .fold(BigRational::zero(), |a, b| a + b)
        };
        let min = self.terms.keys().map(wdeg).min();
        let mut out = Self::zero(self.field.clone(), self.vars.clone());
        if let Some(min) = min {
            for (e, c) in &self.terms {
                if wdeg(e) == min {
                    out.terms.insert(e.clone(), c.clone());
                }
            }
        }
        out
    }

    /// Newton polytope support: all exponent vectors.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Reinterprets coefficients in another field.
    pub fn map_field<G: Field>(
        &self,
        target: &G,
        map: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Option<MultiPoly<G>> {
        let mut out = MultiPoly::zero(target.clone(), self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), map(c)?);
        }
        Some(out)
    }

    /// Same polynomial over a new variable list obtained by selecting
    /// variables `keep` (all other variables must have exponent zero).
    pub fn restrict_vars(&self, keep: &[usize], vars: Arc<Vec<String>>) -> Option<Self> {
        assert_eq!(keep.len(), vars.len());
        let mut out = Self::zero(self.field.clone(), vars);
        for (e, c) in &self.terms {
            let nonzero_dropped = e
                .iter()
                .enumerate()
                .any(|(i, &k)| k > 0 && !keep.contains(&i));
            if nonzero_dropped {
                return None;
            }
            out.terms
                .insert(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        Some(out)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.as_ref().clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let r = self.field.to_rational(c);
                    TermJson {
                        exp: e.clone(),
                        num: r.numer().to_string(),
                        den: r.denom().to_string(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(field: F, json: &PolyJson) -> Result<Self, ArithError> {
        let mut seen = std::collections::BTreeSet::new();
        for (k, v) in json.vars.iter().enumerate() {
            if !seen.insert(v) {
                return Err(ArithError::Parse(format!("/vars/{k}: duplicate variable {v:?}")));
            }
        }
        let vars = Arc::new(json.vars.clone());
        let mut p = Self::zero(field.clone(), vars);
        for (k, t) in json.terms.iter().enumerate() {
            if t.exp.len() != json.vars.len() {
                return Err(ArithError::Parse(format!(
                    "/terms/{k}/exp: expected {} exponents, found {}",
                    json.vars.len(),
                    t.exp.len()
                )));
            }
            let r = parse_rational(&format!("{}/{}", t.num, t.den))
                .ok_or_else(|| ArithError::Parse(format!("/terms/{k}: invalid coefficient")))?;
            let c = field
                .from_rational(&r)
                .ok_or_else(|| ArithError::Parse(format!("/terms/{k}: denominator vanishes")))?;
            if p.terms.contains_key(&t.exp) {
                return Err(ArithError::Parse(format!("/terms/{k}/exp: repeated monomial")));
            }
            p.add_term(t.exp.clone(), c);
        }
        Ok(p)
    }

    /// Parses the JSON text form; errors carry a JSON pointer.
    pub fn parse_json(field: F, text: &[u8]) -> Result<Self, ArithError> {
        let de = &mut serde_json::Deserializer::from_slice(text);
        let json: PolyJson = serde_path_to_error::deserialize(de)
            .map_err(|e| ArithError::Parse(format!("{}: {}", pointer(e.path()), e.inner())))?;
        Self::from_json(field, &json)
    }
}

pub(crate) fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        use serde_path_to_error::Segment;
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{key}")),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Serialized polynomial: `{"vars": [...], "terms": [{"exp", "num", "den"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}
