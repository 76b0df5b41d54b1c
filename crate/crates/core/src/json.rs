//! Serde mirrors of the engine types. Every rational is an exact string.

use serde::{Deserialize, Serialize};

use crate::algebra::AbElement;
use crate::alpha::ThemeClass;
use crate::error::{Error, Result};
use crate::fresco::Presentation;
use crate::rat::{parse_rat, Rat};
use crate::series::SeriesB;
use crate::xi::XiExpansion;

fn rat_from(text: &str) -> Result<Rat> {
    parse_rat(text).ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: format!("invalid rational {text:?}"),
    })
}

pub fn rat_string(x: &Rat) -> String {
    x.to_string()
}

pub fn rat_strings(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(rat_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl From<&SeriesB> for SeriesJson {
    fn from(s: &SeriesB) -> Self {
        SeriesJson {
            order: s.order(),
            coeffs: rat_strings(s.coeffs()),
        }
    }
}

impl TryFrom<&SeriesJson> for SeriesB {
    type Error = Error;

    /// Missing trailing coefficients up to `order` are read as zero.
    fn try_from(j: &SeriesJson) -> Result<SeriesB> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| rat_from(c))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() > j.order + 1 {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("{} coefficients exceed order {}", coeffs.len(), j.order),
            });
        }
        Ok(SeriesB::from_poly(&coeffs, j.order))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub lambda: String,
    pub unit: SeriesJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub factors: Vec<FactorJson>,
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> Self {
        PresentationJson {
            factors: p
                .factors()
                .iter()
                .map(|(l, s)| FactorJson {
                    lambda: rat_string(l),
                    unit: s.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PresentationJson> for Presentation {
    type Error = Error;

    fn try_from(j: &PresentationJson) -> Result<Presentation> {
        let factors = j
            .factors
            .iter()
            .map(|f| Ok((rat_from(&f.lambda)?, SeriesB::try_from(&f.unit)?)))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(factors)
    }
}

/// `sum_m c_m(b) a^m` as the list of `c_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbElementJson {
    pub a_coeffs: Vec<SeriesJson>,
}

impl From<&AbElement> for AbElementJson {
    fn from(u: &AbElement) -> Self {
        AbElementJson {
            a_coeffs: u.coeffs().iter().map(SeriesJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiJson {
    pub lambda: String,
    pub dim: usize,
    pub max_log: usize,
    pub shifts: usize,
    /// `(component, shift, log power, coefficient)`
    pub terms: Vec<(usize, usize, usize, String)>,
}

impl From<&XiExpansion> for XiJson {
    fn from(x: &XiExpansion) -> Self {
        XiJson {
            lambda: rat_string(x.lambda()),
            dim: x.dim(),
            max_log: x.max_log(),
            shifts: x.shifts(),
            terms: x
                .terms()
                .into_iter()
                .map(|(c, m, j, v)| (c, m, j, rat_string(&v)))
                .collect(),
        }
    }
}

impl TryFrom<&XiJson> for XiExpansion {
    type Error = Error;

    fn try_from(j: &XiJson) -> Result<XiExpansion> {
        let lambda = rat_from(&j.lambda)?;
        if lambda <= Rat::from_integer(0.into()) || lambda > Rat::from_integer(1.into()) {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: "lambda must lie in ]0, 1]".into(),
            });
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for (c, m, l, v) in &j.terms {
            if *c == 0 || *c > j.dim || *l > j.max_log {
                return Err(Error::Syntax {
                    line: 1,
                    column: 1,
                    message: format!("term ({c}, {m}, {l}) outside the declared shape"),
                });
            }
            terms.push((*c, *m, *l, rat_from(v)?));
        }
        Ok(XiExpansion::from_terms(
            lambda, j.dim, j.max_log, j.shifts, &terms,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeJson {
    pub lambdas: Vec<String>,
    pub p: i64,
    pub parameter: String,
}

impl From<&ThemeClass> for ThemeJson {
    fn from(t: &ThemeClass) -> Self {
        ThemeJson {
            lambdas: vec![rat_string(&t.lambda_low), rat_string(&t.lambda_high)],
            p: t.p,
            parameter: rat_string(&t.parameter),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::rat::{int, rat};

    #[test]
    fn series_shape() {
        let s = SeriesB::from_poly(&[int(1), int(0), int(3)], 4);
        let j = serde_json::to_string(&SeriesJson::from(&s)).unwrap();
        assert_eq!(j, r#"{"order":4,"coeffs":["1","0","3","0","0"]}"#);
        let back: SeriesJson =
            serde_json::from_str(r#"{"order":4,"coeffs":["1","0","3"]}"#).unwrap();
        assert_eq!(SeriesB::try_from(&back).unwrap(), s);
    }

    #[test]
    fn presentation_round_trip() {
        let p = parse_presentation("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)", Some(6)).unwrap();
        let text = serde_json::to_string(&PresentationJson::from(&p)).unwrap();
        assert!(text.starts_with(r#"{"factors":[{"lambda":"5/2","unit":{"order":6"#));
        let j: PresentationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Presentation::try_from(&j).unwrap(), p);
    }

    #[test]
    fn theme_shape() {
        let t = ThemeClass {
            lambda_low: int(3),
            lambda_high: int(4),
            p: 2,
            parameter: int(1),
        };
        assert_eq!(
            serde_json::to_string(&ThemeJson::from(&t)).unwrap(),
            r#"{"lambdas":["3","4"],"p":2,"parameter":"1"}"#
        );
    }

    #[test]
    fn xi_round_trip() {
        let x = XiExpansion::from_terms(rat(1, 2), 2, 1, 6, &[(2, 3, 1, rat(-1, 3))]);
        let j = XiJson::from(&x);
        assert_eq!(j.terms, vec![(2, 3, 1, "-1/3".to_string())]);
        assert_eq!(XiExpansion::try_from(&j).unwrap(), x);
        let bad = XiJson { dim: 1, ..j };
        assert!(XiExpansion::try_from(&bad).is_err());
    }
}
