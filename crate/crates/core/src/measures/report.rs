use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Serialize;

use crate::boolfn::BooleanFunction;
use crate::error::Result;
use crate::measures::{
    approx::{approx_degree, MAX_APPROX_ARITY},
    certificate::certificate_complexity,
    polynomial::degree,
    sensitivity::{block_sensitivity, sensitivity, MAX_BS_ARITY},
    tree::{det_complexity, MAX_DT_ARITY},
};

/// A measure that can be skipped on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Deg,
    ApproxDeg,
    S,
    Bs,
    C,
    D,
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deg" => Ok(Measure::Deg),
            "approx_deg" | "adeg" => Ok(Measure::ApproxDeg),
            "s" => Ok(Measure::S),
            "bs" => Ok(Measure::Bs),
            "c" | "c0" | "c1" => Ok(Measure::C),
            "d" | "d_depth" => Ok(Measure::D),
            other => Err(format!("unknown measure {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub eps: BigRational,
    pub skip: BTreeSet<Measure>,
    /// Raise the certificate-complexity arity cap.
    pub allow_large: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            eps: crate::measures::approx::default_eps(),
            skip: BTreeSet::new(),
            allow_large: false,
        }
    }
}

/// Every computed measure of one function. Absent fields were skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub arity: usize,
    pub deg: Option<usize>,
    pub approx_deg: Option<usize>,
    pub eps: String,
    pub s: Option<usize>,
    pub bs: Option<usize>,
    pub c0: Option<usize>,
    pub c1: Option<usize>,
    pub d_depth: Option<usize>,
    /// `deg / 2`, the polynomial-method lower bound on exact quantum queries.
    pub qe_lower: Option<String>,
    /// `approx_deg / 2`, the lower bound on bounded-error quantum queries.
    pub q2_lower_poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adversary_bound: Option<String>,
}

fn half(k: usize) -> String {
    if k % 2 == 0 {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

fn fmt_eps(e: &BigRational) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl ComplexityReport {
    pub fn compute(f: &BooleanFunction, opts: &ReportOptions) -> Result<Self> {
        let wants = |m: Measure| !opts.skip.contains(&m);
        let deg = if wants(Measure::Deg) { Some(degree(f)?) } else { None };
        let approx_deg = if wants(Measure::ApproxDeg) {
            Some(approx_degree(f, &opts.eps)?.0)
        } else {
            None
        };
        let s = if wants(Measure::S) { Some(sensitivity(f)?) } else { None };
        let bs = if wants(Measure::Bs) {
            Some(block_sensitivity(f)?)
        } else {
            None
        };
        let (c0, c1) = if wants(Measure::C) {
            let c = certificate_complexity(f, opts.allow_large)?;
            (Some(c.c0), Some(c.c1))
        } else {
            (None, None)
        };
        let d_depth = if wants(Measure::D) {
            Some(det_complexity(f)?.0)
        } else {
            None
        };
        Ok(Self {
            arity: f.arity(),
            deg,
            approx_deg,
            eps: fmt_eps(&opts.eps),
            s,
            bs,
            c0,
            c1,
            d_depth,
            qe_lower: deg.map(half),
            q2_lower_poly: approx_deg.map(half),
            adversary_bound: None,
        })
    }

    /// Skips every measure whose exact search would exceed its arity cap.
    pub fn auto_skips(f: &BooleanFunction, allow_large: bool) -> BTreeSet<Measure> {
        let n = f.arity();
        let mut skip = BTreeSet::new();
        if n > MAX_APPROX_ARITY {
            skip.insert(Measure::ApproxDeg);
        }
        if n > MAX_BS_ARITY {
            skip.insert(Measure::Bs);
        }
        let cert_cap = if allow_large {
            crate::measures::certificate::MAX_CERT_ARITY
        } else {
            crate::measures::certificate::DEFAULT_CERT_ARITY
        };
        if n > cert_cap {
            skip.insert(Measure::C);
        }
        if n > MAX_DT_ARITY {
            skip.insert(Measure::D);
        }
        skip
    }

    /// Checks `s <= bs <= D`, `deg <= D` and `approx_deg <= deg` on the
    /// fields that are present.
    pub fn order_relations_hold(&self) -> bool {
        let le = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        le(self.s, self.bs)
            && le(self.bs, self.d_depth)
            && le(self.s, self.d_depth)
            && le(self.deg, self.d_depth)
            && le(self.approx_deg, self.deg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let field = |v: Option<usize>| v.map_or("absent".to_string(), |v| v.to_string());
        let _ = writeln!(out, "arity          {}", self.arity);
        let _ = writeln!(out, "deg            {}", field(self.deg));
        let _ = writeln!(
            out,
            "approx_deg     {} (eps = {})",
            field(self.approx_deg),
            self.eps
        );
        let _ = writeln!(out, "s              {}", field(self.s));
        let _ = writeln!(out, "bs             {}", field(self.bs));
        let _ = writeln!(out, "c0             {}", field(self.c0));
        let _ = writeln!(out, "c1             {}", field(self.c1));
        let _ = writeln!(out, "d_depth        {}", field(self.d_depth));
        let _ = writeln!(
            out,
            "qe_lower       {}",
            self.qe_lower.as_deref().unwrap_or("absent")
        );
        let _ = writeln!(
            out,
            "q2_lower_poly  {}",
            self.q2_lower_poly.as_deref().unwrap_or("absent")
        );
        if let Some(b) = &self.adversary_bound {
            let _ = writeln!(out, "adversary      {b}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_function_report() {
        let f = BooleanFunction::base_f();
        let r = ComplexityReport::compute(&f, &ReportOptions::default()).unwrap();
        assert_eq!(r.deg, Some(2));
        assert_eq!(r.d_depth, Some(3));
        assert_eq!(r.s, Some(2));
        assert_eq!(r.bs, Some(3));
        assert_eq!(r.qe_lower.as_deref(), Some("1"));
        assert!(r.order_relations_hold());
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "deg",
            "approx_deg",
            "eps",
            "s",
            "bs",
            "c0",
            "c1",
            "d_depth",
            "qe_lower",
            "q2_lower_poly",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["eps"], "1/3");
    }

    #[test]
    fn skipped_fields_are_absent() {
        let f = BooleanFunction::nae_g();
        let opts = ReportOptions {
            skip: [Measure::D, Measure::ApproxDeg].into_iter().collect(),
            ..Default::default()
        };
        let r = ComplexityReport::compute(&f, &opts).unwrap();
        assert_eq!(r.d_depth, None);
        assert_eq!(r.q2_lower_poly, None);
        assert!(r.to_text().contains("d_depth        absent"));
        assert_eq!("bs".parse::<Measure>(), Ok(Measure::Bs));
        assert!("zz".parse::<Measure>().is_err());
    }
}
