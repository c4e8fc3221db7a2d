//! `{"base": …, "a": {"x,y": "n/d"}, "b": {"x": "n/d"}}`. Keys are the
//! comma-joined coordinates of `x` followed by those of `y`. Entries missing
//! from the input are zero.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::QCSheafModel;
use crate::error::{Error, Result};
use crate::etale::EtaleGroupModel;
use crate::intlat::Qz;

fn key(parts: &[&[i64]]) -> String {
    parts
        .iter()
        .flat_map(|p| p.iter())
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

struct Table<'a> {
    keys: Vec<String>,
    vals: &'a [Qz],
}

impl Serialize for Table<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.vals.len()))?;
        for (k, v) in self.keys.iter().zip(self.vals) {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct Out<'a> {
    base: &'a EtaleGroupModel,
    a: Table<'a>,
    b: Table<'a>,
}

impl Serialize for QCSheafModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let els = &self.base.tables().elements;
        let akeys = els
            .iter()
            .flat_map(|x| els.iter().map(move |y| key(&[x, y])))
            .collect();
        let bkeys = els.iter().map(|x| key(&[x])).collect();
        Out {
            base: &self.base,
            a: Table {
                keys: akeys,
                vals: &self.a,
            },
            b: Table {
                keys: bkeys,
                vals: &self.b,
            },
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
struct In {
    base: EtaleGroupModel,
    #[serde(default)]
    a: BTreeMap<String, Qz>,
    #[serde(default)]
    b: BTreeMap<String, Qz>,
}

fn parse_key(k: &str, len: usize) -> Result<Vec<i64>> {
    let bad = || Error::Parse(format!("table key {k:?} does not have {len} coordinates"));
    if len == 0 {
        return if k.trim().is_empty() { Ok(vec![]) } else { Err(bad()) };
    }
    let v: Vec<i64> = k
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    if v.len() != len {
        return Err(bad());
    }
    Ok(v)
}

fn fill(
    target: &mut [Qz],
    seen: &mut [bool],
    idx: usize,
    v: Qz,
    k: &str,
) -> Result<()> {
    if seen[idx] && target[idx] != v {
        return Err(Error::Parse(format!(
            "table key {k:?} conflicts with an equivalent key"
        )));
    }
    seen[idx] = true;
    target[idx] = v;
    Ok(())
}

impl QCSheafModel {
    fn from_json_value(v: In) -> Result<Self> {
        let base = v.base;
        let g = base.points().clone();
        let r = g.rank();
        let n = base.order();
        let mut a = vec![Qz::ZERO; n * n];
        let mut b = vec![Qz::ZERO; n];
        let mut sa = vec![false; n * n];
        let mut sb = vec![false; n];
        for (k, val) in &v.a {
            let c = parse_key(k, 2 * r)?;
            let i = g.index_of(&g.reduced(c[..r].to_vec()));
            let j = g.index_of(&g.reduced(c[r..].to_vec()));
            fill(&mut a, &mut sa, i * n + j, *val, k)?;
        }
        for (k, val) in &v.b {
            let c = parse_key(k, r)?;
            let i = g.index_of(&g.reduced(c));
            fill(&mut b, &mut sb, i, *val, k)?;
        }
        QCSheafModel::from_tables(base, a, b)
    }
}

impl<'de> Deserialize<'de> for QCSheafModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        QCSheafModel::from_json_value(In::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;

    #[test]
    fn round_trip() {
        let e = EtaleGroupModel::constant(FgAbGroup::new(vec![2, 2]).unwrap()).unwrap();
        let q = QCSheafModel::from_fns(
            e,
            |x, y| Qz::new((x[0] * y[1]) as i128, 2),
            |x| Qz::new((x[0] * x[1]) as i128, 2),
        );
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains(r#""1,0,0,1":"1/2""#));
        let back: QCSheafModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn sparse_input_and_conflicts() {
        let s = r#"{"base":{"factors":[4],"frob":[[1]]},"b":{"1":"1/4","2":"1/2","3":"3/4"}}"#;
        let q: QCSheafModel = serde_json::from_str(s).unwrap();
        assert!(q.is_valid());
        assert_eq!(q.b_at(&[3]), Qz::new(3, 4));
        let s = r#"{"base":{"factors":[4],"frob":[[1]]},"b":{"1":"1/4","5":"1/2"}}"#;
        assert!(serde_json::from_str::<QCSheafModel>(s).is_err());
        let s = r#"{"base":{"factors":[4],"frob":[[1]]},"b":{"1,2":"1/4"}}"#;
        assert!(serde_json::from_str::<QCSheafModel>(s).is_err());
    }
}
