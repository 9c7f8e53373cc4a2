use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Pattern, Point};
use crate::error::{Error, Result};

type PointRef = (String, String);

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct PatternFile {
    variables: Vec<String>,
    points: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    positive: Vec<(PointRef, PointRef)>,
    #[serde(default)]
    negative: Vec<(PointRef, PointRef)>,
    #[serde(default)]
    var_order: Vec<(String, String)>,
    #[serde(default)]
    dom_order: Vec<(PointRef, PointRef)>,
    #[serde(default)]
    diseq: Vec<(PointRef, PointRef)>,
}

impl Pattern {
    pub fn from_json(text: &str) -> Result<Pattern> {
        let file: PatternFile = serde_json::from_str(text)?;
        if let Some(extra) = file.points.keys().find(|k| !file.variables.contains(k)) {
            return Err(Error::UnknownVariable(extra.clone()));
        }
        let mut points = Vec::new();
        let mut index = BTreeMap::new();
        for (v, name) in file.variables.iter().enumerate() {
            for p in file.points.get(name).into_iter().flatten() {
                index.insert((name.clone(), p.clone()), points.len());
                points.push(Point { var: v, name: p.clone() });
            }
        }
        let lookup = |r: &PointRef| {
            index
                .get(r)
                .copied()
                .ok_or_else(|| Error::UnknownPoint(format!("{}.{}", r.0, r.1)))
        };
        let var = |name: &String| {
            file.variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))
        };
        let mut cpt = Vec::new();
        for (list, val) in [(&file.positive, true), (&file.negative, false)] {
            for (p, q) in list {
                cpt.push((lookup(p)?, lookup(q)?, val));
            }
        }
        let vo = file
            .var_order
            .iter()
            .map(|(a, b)| Ok((var(a)?, var(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let pairs = |list: &[(PointRef, PointRef)]| {
            list.iter()
                .map(|(p, q)| Ok((lookup(p)?, lookup(q)?)))
                .collect::<Result<Vec<_>>>()
        };
        let dord = pairs(&file.dom_order)?;
        let dq = pairs(&file.diseq)?;
        Pattern::new(file.variables.clone(), points, cpt, vo, dord, dq)
    }

    fn point_ref(&self, p: usize) -> PointRef {
        let pt = &self.points[p];
        (self.variables[pt.var].clone(), pt.name.clone())
    }

    fn to_file(&self) -> PatternFile {
        let pair = |&(p, q): &(usize, usize)| (self.point_ref(p), self.point_ref(q));
        PatternFile {
            variables: self.variables.clone(),
            points: self
                .variables
                .iter()
                .enumerate()
                .map(|(v, name)| {
                    (
                        name.clone(),
                        self.by_var[v].iter().map(|&p| self.points[p].name.clone()).collect(),
                    )
                })
                .collect(),
            positive: self.positive_edges().iter().map(pair).collect(),
            negative: self.negative_edges().iter().map(pair).collect(),
            var_order: self
                .var_order
                .iter()
                .map(|&(a, b)| (self.variables[a].clone(), self.variables[b].clone()))
                .collect(),
            dom_order: self.dom_order.iter().map(pair).collect(),
            diseq: self.diseq.iter().map(pair).collect(),
        }
    }

    /// Compact JSON; only explicit disequalities are written.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serialisable")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PatternName;

    #[test]
    fn builtins_round_trip() {
        for name in PatternName::all() {
            let p = Pattern::builtin(name);
            let text = p.to_json();
            let back = Pattern::from_json(&text).unwrap();
            assert_eq!(back, p, "{name}");
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(Pattern::from_json(r#"{"variables":["x"],"points":{"y":["a"]}}"#).is_err());
        let bad_ref = r#"{"variables":["x","y"],"points":{"x":["a"],"y":["b"]},"positive":[[["x","a"],["y","c"]]]}"#;
        assert!(matches!(Pattern::from_json(bad_ref), Err(Error::UnknownPoint(_))));
        let cyc = r#"{"variables":["x"],"points":{"x":["a","b"]},"domOrder":[[["x","a"],["x","b"]],[["x","b"],["x","a"]]]}"#;
        assert!(matches!(Pattern::from_json(cyc), Err(Error::CyclicOrder(_))));
    }

    #[test]
    fn documented_layout() {
        let text = r#"{"variables":["x","y"],"points":{"x":["a","b"],"y":["c"]},"positive":[[["x","a"],["y","c"]]],"negative":[[["x","b"],["y","c"]]],"varOrder":[["x","y"]],"domOrder":[[["x","b"],["x","a"]]],"diseq":[]}"#;
        let p = Pattern::from_json(text).unwrap();
        assert_eq!(p.to_json(), text);
        let a = p.point_index("x", "a").unwrap();
        let b = p.point_index("x", "b").unwrap();
        assert!(p.dom_less(b, a));
    }
}
