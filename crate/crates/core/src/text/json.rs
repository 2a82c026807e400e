//! JSON forms of series and place descriptions.
//!
//! Series: `{"field": "F2", "group": "1/2", "terms": [["-1/2", "1"], ...],
//! "precision": "3"}` with `precision` null for exact sums.
//!
//! Places are tagged by `kind`:
//!
//! ```json
//! {"kind": "eval", "field": "Q", "point": [["x1", "2"]]}
//! {"kind": "monomial", "field": "Q", "group": "quad",
//!  "values": [["x1", "1"], ["x2", "sqrt2"]], "residues": [["y1", "z1"]]}
//! {"kind": "trivial", "field": "Q", "vars": ["x2"]}
//! {"kind": "series", "assignments": [["x", {"stream": {"name": "ThetaDefect", "p": 2}}]]}
//! {"kind": "compose", "first": {...}, "second": {...}}
//! ```

use serde::{Deserialize, Serialize};

use super::{group_name, parse_field, parse_field_elem, parse_group_desc, parse_group_elem};
use crate::error::{Error, Result};
use crate::places::{Embedding, PlaceDesc};
use crate::series::{Precision, Series, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub field: String,
    pub group: String,
    pub terms: Vec<(String, String)>,
    pub precision: Option<String>,
}

impl SeriesJson {
    pub fn from_series(s: &Series) -> Self {
        SeriesJson {
            field: s.field().to_string(),
            group: group_name(s.group()),
            terms: s.terms().iter().map(|(e, c)| (e.to_string(), c.to_string())).collect(),
            precision: s.precision().finite().map(|p| p.to_string()),
        }
    }

    pub fn to_series(&self) -> Result<Series> {
        let field = parse_field(&self.field)?;
        let group = parse_group_desc(&self.group)?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((parse_group_elem(e, &group)?, parse_field_elem(c, &field)?)))
            .collect::<Result<Vec<_>>>()?;
        let prec = match &self.precision {
            Some(p) => Precision::Finite(parse_group_elem(p, &group)?),
            None => Precision::Infinite,
        };
        Series::new(&field, &group, terms, prec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmbeddingJson {
    Stream { stream: Stream },
    Series(SeriesJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaceJson {
    Eval {
        field: String,
        point: Vec<(String, String)>,
    },
    Monomial {
        field: String,
        group: String,
        values: Vec<(String, String)>,
        #[serde(default)]
        residues: Vec<(String, String)>,
    },
    Trivial {
        field: String,
        vars: Vec<String>,
    },
    Series {
        assignments: Vec<(String, EmbeddingJson)>,
        #[serde(default)]
        declared_dim: Option<usize>,
    },
    Compose {
        first: Box<PlaceJson>,
        second: Box<PlaceJson>,
    },
}

impl PlaceJson {
    pub fn from_place(p: &PlaceDesc) -> Self {
        match p {
            PlaceDesc::Eval { field, point } => PlaceJson::Eval {
                field: field.to_string(),
                point: point.iter().map(|(n, a)| (n.clone(), a.to_string())).collect(),
            },
            PlaceDesc::Monomial { field, group, values, residues } => PlaceJson::Monomial {
                field: field.to_string(),
                group: group_name(group),
                values: values.iter().map(|(n, v)| (n.clone(), v.to_string())).collect(),
                residues: residues.clone(),
            },
            PlaceDesc::SeriesEmbed { assignments, declared_dim } => PlaceJson::Series {
                assignments: assignments
                    .iter()
                    .map(|(n, e)| {
                        let j = match e {
                            Embedding::Series(s) => EmbeddingJson::Series(SeriesJson::from_series(s)),
                            Embedding::Stream(s) => EmbeddingJson::Stream { stream: s.clone() },
                        };
                        (n.clone(), j)
                    })
                    .collect(),
                declared_dim: *declared_dim,
            },
            PlaceDesc::Compose(a, b) => {
                PlaceJson::Compose { first: Box::new(PlaceJson::from_place(a)), second: Box::new(PlaceJson::from_place(b)) }
            }
        }
    }

    pub fn to_place(&self) -> Result<PlaceDesc> {
        match self {
            PlaceJson::Eval { field, point } => {
                let f = parse_field(field)?;
                let pt = point.iter().map(|(n, a)| Ok((n.clone(), parse_field_elem(a, &f)?))).collect::<Result<_>>()?;
                PlaceDesc::eval(&f, pt)
            }
            PlaceJson::Monomial { field, group, values, residues } => {
                let f = parse_field(field)?;
                let g = parse_group_desc(group)?;
                let vals = values.iter().map(|(n, v)| Ok((n.clone(), parse_group_elem(v, &g)?))).collect::<Result<_>>()?;
                PlaceDesc::monomial(&f, &g, vals, residues.clone())
            }
            PlaceJson::Trivial { field, vars } => Ok(PlaceDesc::trivial(&parse_field(field)?, vars)),
            PlaceJson::Series { assignments, declared_dim } => {
                let a = assignments
                    .iter()
                    .map(|(n, e)| {
                        let emb = match e {
                            EmbeddingJson::Series(s) => Embedding::Series(s.to_series()?),
                            EmbeddingJson::Stream { stream } => {
                                stream.validate()?;
                                Embedding::Stream(stream.clone())
                            }
                        };
                        Ok((n.clone(), emb))
                    })
                    .collect::<Result<_>>()?;
                PlaceDesc::series_embed(a, *declared_dim)
            }
            PlaceJson::Compose { first, second } => PlaceDesc::compose(first.to_place()?, second.to_place()?),
        }
    }
}

pub fn place_from_json(s: &str) -> Result<PlaceDesc> {
    let j: PlaceJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_place()
}

pub fn place_to_json(p: &PlaceDesc) -> String {
    serde_json::to_string_pretty(&PlaceJson::from_place(p)).expect("place descriptions serialize")
}

pub fn series_from_json(s: &str) -> Result<Series> {
    let j: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_series()
}

pub fn series_to_json(s: &Series) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from_series(s)).expect("series serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;
    use crate::groups::{rat, GroupDesc, GroupElem};

    #[test]
    fn lex_composite_from_json() {
        let src = r#"{"kind": "compose",
            "first": {"kind": "monomial", "field": "Q", "group": "Z", "values": [["x1", "1"]], "residues": [["x2", "x2"]]},
            "second": {"kind": "monomial", "field": "Q", "group": "Z", "values": [["x2", "1"]]}}"#;
        let p = place_from_json(src).unwrap();
        assert_eq!(p.group().unwrap(), GroupDesc::lex(2).unwrap());
        assert_eq!(place_from_json(&place_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn stream_embedding_round_trip() {
        let src = r#"{"kind": "series", "assignments": [["x", {"stream": {"name": "ThetaDefect", "p": 2}}],
            ["y", {"field": "F2", "group": "1/2^inf", "terms": [["1", "1"]], "precision": null}]]}"#;
        let p = place_from_json(src).unwrap();
        assert_eq!(place_from_json(&place_to_json(&p)).unwrap(), p);
        assert!(place_from_json(r#"{"kind": "series", "assignments": [["x", {"stream": {"name": "ThetaDefect", "p": 4}}]]}"#).is_err());
    }

    #[test]
    fn series_json_round_trip() {
        let f9 = FieldDesc::finite(3, 2).unwrap();
        let g = GroupDesc::QuadSqrt2;
        let s = Series::new(
            &f9,
            &g,
            vec![(GroupElem::Quad(rat(0, 1), rat(1, 1)), f9.generator()), (GroupElem::Quad(rat(2, 1), rat(0, 1)), f9.one())],
            Precision::Finite(GroupElem::Quad(rat(3, 1), rat(-1, 1))),
        )
        .unwrap();
        let j = serde_json::to_string(&series_to_json(&s)).unwrap();
        assert_eq!(series_from_json(&j).unwrap(), s);
    }
}
