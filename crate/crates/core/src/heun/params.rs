//! Heun parameter bundles and their JSON form.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HeunError;
use crate::exactalg::scalar::{parse_rational, rational_as_i64, rational_to_string};
use crate::exactalg::{MultiPoly, ParamElem, ParamRing, PolyRing, Rational, Ring, Scalar};

/// A parameter value in an instance file: a rational (`"p/q"` string or
/// integer) or a named symbol (`{"sym": "q"}`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Sym { sym: String },
    Int(i64),
    Text(String),
}

impl ParamValue {
    pub fn rational(r: &Rational) -> Self {
        ParamValue::Text(rational_to_string(r))
    }

    pub fn int(n: i64) -> Self {
        ParamValue::Int(n)
    }

    pub fn sym(name: &str) -> Self {
        ParamValue::Sym { sym: name.to_string() }
    }

    pub fn as_rational(&self) -> Result<Option<Rational>, HeunError> {
        match self {
            ParamValue::Sym { .. } => Ok(None),
            ParamValue::Int(n) => Ok(Some(Rational::from_integer((*n).into()))),
            ParamValue::Text(s) => Ok(Some(parse_rational(s)?)),
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match self {
            ParamValue::Sym { sym } => Some(sym),
            _ => None,
        }
    }
}

/// The serialized form of [`HeunParams`]. `delta` may be omitted, in which
/// case it is derived from the Fuchs relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeunSpec {
    pub alpha: ParamValue,
    pub beta: ParamValue,
    pub gamma: ParamValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<ParamValue>,
    pub epsilon: ParamValue,
    pub q: ParamValue,
    pub t: ParamValue,
}

impl HeunSpec {
    /// Symbol names in canonical order.
    pub fn symbols(&self) -> Vec<String> {
        let mut v = Vec::new();
        for p in [&self.alpha, &self.beta, &self.gamma, &self.epsilon, &self.t, &self.q] {
            if let Some(s) = p.symbol() {
                if !v.iter().any(|x: &String| x == s) {
                    v.push(s.to_string());
                }
            }
        }
        if let Some(s) = self.delta.as_ref().and_then(|d| d.symbol()) {
            if !v.iter().any(|x: &String| x == s) {
                v.push(s.to_string());
            }
        }
        v
    }

    /// Build the bundle in a fresh ring whose variables are the symbols
    /// followed by `extra_vars`. When `t` is symbolic, `t` and `t - 1` are
    /// made invertible.
    pub fn build<F: Scalar>(&self, extra_vars: &[&str]) -> Result<HeunParams<F>, HeunError> {
        let mut names = self.symbols();
        for e in extra_vars {
            if !names.iter().any(|n| n == e) {
                names.push(e.to_string());
            }
        }
        let vars = PolyRing::new(names);
        let mut units = Vec::new();
        if let Some(ts) = self.t.symbol() {
            let t = MultiPoly::var(&vars, ts)?;
            units.push(t.clone());
            units.push(&t - &MultiPoly::one(&vars));
        }
        let ring = ParamRing::with_units(vars, units);
        let conv = |v: &ParamValue| -> Result<ParamElem<F>, HeunError> {
            match v.as_rational()? {
                Some(r) => Ok(ring.rational(&r)),
                None => Ok(ring.var(v.symbol().unwrap())?),
            }
        };
        let delta = match &self.delta {
            Some(d) => Some(conv(d)?),
            None => None,
        };
        HeunParams::from_elems(
            conv(&self.alpha)?,
            conv(&self.beta)?,
            conv(&self.gamma)?,
            delta,
            conv(&self.epsilon)?,
            conv(&self.q)?,
            conv(&self.t)?,
        )
    }
}

/// Parameters of Heun's equation
/// `y'' + (g/z + d/(z-1) + e/(z-t)) y' + (ab z - q)/(z(z-1)(z-t)) y = 0`
/// with `g + d + e = a + b + 1`. All entries live in one parameter ring.
#[derive(Clone, Debug)]
pub struct HeunParams<F> {
    pub alpha: ParamElem<F>,
    pub beta: ParamElem<F>,
    pub gamma: ParamElem<F>,
    pub delta: ParamElem<F>,
    pub epsilon: ParamElem<F>,
    pub q: ParamElem<F>,
    pub t: ParamElem<F>,
}

impl<F: Scalar> HeunParams<F> {
    /// `delta`, when given, must satisfy the Fuchs relation.
    pub fn from_elems(
        alpha: ParamElem<F>,
        beta: ParamElem<F>,
        gamma: ParamElem<F>,
        delta: Option<ParamElem<F>>,
        epsilon: ParamElem<F>,
        q: ParamElem<F>,
        t: ParamElem<F>,
    ) -> Result<Self, HeunError> {
        let derived = alpha.add_ref(&beta).add_ref(&alpha.one_like()).sub_ref(&gamma).sub_ref(&epsilon);
        let delta = match delta {
            Some(d) => {
                if !F::EXACT {
                    if d.sub_ref(&derived).magnitude() > 1e-20 * (1.0 + derived.magnitude()) {
                        return Err(HeunError::FuchsRelation(format!("delta = {d}, expected {derived}")));
                    }
                } else if !d.sub_ref(&derived).is_zero() {
                    return Err(HeunError::FuchsRelation(format!("delta = {d}, expected {derived}")));
                }
                d
            }
            None => derived,
        };
        for bad in [0i64, 1] {
            if t.sub_ref(&t.from_i64_like(bad)).is_zero() {
                return Err(HeunError::Degenerate(format!("t = {bad}")));
            }
        }
        Ok(HeunParams { alpha, beta, gamma, delta, epsilon, q, t })
    }

    pub fn ring(&self) -> &Arc<ParamRing<F>> {
        self.alpha.ring()
    }

    /// Same parameters with a different accessory parameter.
    pub fn with_q(&self, q: ParamElem<F>) -> Self {
        HeunParams { q, ..self.clone() }
    }

    /// Move every entry into another ring over the same variables.
    pub fn rehome(&self, ring: &Arc<ParamRing<F>>) -> Result<Self, HeunError> {
        Ok(HeunParams {
            alpha: self.alpha.rehome(ring)?,
            beta: self.beta.rehome(ring)?,
            gamma: self.gamma.rehome(ring)?,
            delta: self.delta.rehome(ring)?,
            epsilon: self.epsilon.rehome(ring)?,
            q: self.q.rehome(ring)?,
            t: self.t.rehome(ring)?,
        })
    }

    pub fn entries(&self) -> [(&'static str, &ParamElem<F>); 7] {
        [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
            ("epsilon", &self.epsilon),
            ("q", &self.q),
            ("t", &self.t),
        ]
    }
}

impl HeunParams<Rational> {
    /// Integer value of a parameter, when it is a constant integer.
    pub fn int_value(x: &ParamElem<Rational>) -> Option<i64> {
        x.constant_value().and_then(|r| rational_as_i64(&r))
    }

    /// Serialize: constants as strings, bare variables as symbols; compound
    /// expressions are reported as strings of their printed form.
    pub fn to_json_map(&self) -> BTreeMap<String, serde_json::Value> {
        let mut m = BTreeMap::new();
        for (k, v) in self.entries() {
            let val = match v.constant_value() {
                Some(r) => serde_json::Value::String(rational_to_string(&r)),
                None => {
                    let s = v.to_string();
                    if v.ring().vars().index_of(&s).is_some() {
                        serde_json::json!({ "sym": s })
                    } else {
                        serde_json::Value::String(s)
                    }
                }
            };
            m.insert(k.to_string(), val);
        }
        m
    }
}

impl<F: Scalar> fmt::Display for HeunParams<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(k, v)| format!("{k} = {v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}
