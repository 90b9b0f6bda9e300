//! Registry of known level-one cuspidal parameters: the built-in list of 27
//! entries of motivic weight <= 24 plus user-supplied extensions, with a
//! plain-text persistence format (one entry per line, human-diffable).

use crate::kinf::{DualityType, KInfElement};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub l_param: KInfElement,
    pub self_dual: bool,
    pub duality_type: DualityType,
}

impl CatalogEntry {
    pub fn dim(&self) -> i64 {
        self.l_param.dim()
    }

    /// Motivic weight of the parameter.
    pub fn motivic_weight(&self) -> u32 {
        self.l_param.motivic_weight()
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    by_name: BTreeMap<String, usize>,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("duplicate entry name `{0}`")]
    Duplicate(String),
    #[error("unknown entry `{0}`")]
    Unknown(String),
    #[error("entry `{0}` violates catalog invariants: {1}")]
    Invalid(String, String),
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self, CatalogError> {
        let mut by_name = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if !e.l_param.is_effective() {
                return Err(CatalogError::Invalid(e.name.clone(), "not effective".into()));
            }
            if !e.l_param.det_is_one() {
                return Err(CatalogError::Invalid(e.name.clone(), "determinant is not 1".into()));
            }
            if by_name.insert(e.name.clone(), i).is_some() {
                return Err(CatalogError::Duplicate(e.name.clone()));
            }
        }
        Ok(Catalog { entries, by_name })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.by_name
            .get(name)
            .map(|i| &self.entries[*i])
            .ok_or_else(|| CatalogError::Unknown(name.into()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serialize in the line format `NAME sd=<0|1> type=<S|O|N> L=<kinf>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let sd = if e.self_dual { 1 } else { 0 };
            let _ = writeln!(out, "{} sd={} type={} L={}", e.name, sd, e.duality_type, e.l_param);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut name = None;
            let mut sd = None;
            let mut ty = None;
            let mut l = None;
            for (i, tok) in line.split_whitespace().enumerate() {
                if i == 0 {
                    name = Some(tok.to_string());
                    continue;
                }
                let (k, v) = tok
                    .split_once('=')
                    .ok_or_else(|| CatalogError::Parse(idx + 1, format!("bad token `{tok}`")))?;
                match k {
                    "sd" => {
                        sd = Some(v == "1");
                    }
                    "type" => {
                        ty = Some(match v {
                            "S" => DualityType::Symplectic,
                            "O" => DualityType::Orthogonal,
                            "N" => DualityType::None,
                            _ => return Err(CatalogError::Parse(idx + 1, format!("bad type `{v}`"))),
                        });
                    }
                    "L" => {
                        l = Some(
                            KInfElement::parse(v)
                                .map_err(|e| CatalogError::Parse(idx + 1, e.to_string()))?,
                        );
                    }
                    _ => return Err(CatalogError::Parse(idx + 1, format!("unknown key `{k}`"))),
                }
            }
            let name = name.ok_or_else(|| CatalogError::Parse(idx + 1, "missing name".into()))?;
            entries.push(CatalogEntry {
                name,
                l_param: l.ok_or_else(|| CatalogError::Parse(idx + 1, "missing L".into()))?,
                self_dual: sd.ok_or_else(|| CatalogError::Parse(idx + 1, "missing sd".into()))?,
                duality_type: ty.ok_or_else(|| CatalogError::Parse(idx + 1, "missing type".into()))?,
            });
        }
        Catalog::new(entries)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Parse(0, format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}

fn sympl(name: &str, ws: &[u32]) -> CatalogEntry {
    let mut l = KInfElement::zero();
    for w in ws {
        l = l.add(&KInfElement::i_w(*w));
    }
    CatalogEntry { name: name.into(), l_param: l, self_dual: true, duality_type: DualityType::Symplectic }
}

fn orth(name: &str, l: KInfElement) -> CatalogEntry {
    CatalogEntry { name: name.into(), l_param: l, self_dual: true, duality_type: DualityType::Orthogonal }
}

/// The built-in list of the 27 known parameters of motivic weight <= 24.
pub fn builtin() -> Catalog {
    use KInfElement as K;
    let mut v = Vec::new();
    v.push(orth("1", K::one()));
    for w in [11u32, 15, 17, 19, 21] {
        v.push(sympl(&format!("Delta{w}"), &[w]));
    }
    v.push(sympl("Delta19,7", &[19, 7]));
    v.push(sympl("Delta21,5", &[21, 5]));
    v.push(sympl("Delta21,9", &[21, 9]));
    v.push(sympl("Delta21,13", &[21, 13]));
    v.push(orth("Sym2Delta11", K::i_w(22).add(&K::eps())));
    v.push(sympl("Delta23^1", &[23]));
    v.push(sympl("Delta23^2", &[23]));
    for u in [7u32, 9, 13] {
        v.push(sympl(&format!("Delta23,{u}"), &[23, u]));
    }
    for (a, b) in [(13u32, 5u32), (15, 3), (15, 7), (17, 5), (17, 9), (19, 3), (19, 11)] {
        v.push(sympl(&format!("Delta23,{a},{b}"), &[23, a, b]));
    }
    v.push(sympl("Delta23,21,17,11,3", &[23, 21, 17, 11, 3]));
    v.push(orth(
        "Oo24,16,8",
        K::i_w(24).add(&K::i_w(16)).add(&K::i_w(8)).add(&K::eps()),
    ));
    v.push(orth(
        "Oe24,18,10,4",
        K::i_w(24).add(&K::i_w(18)).add(&K::i_w(10)).add(&K::i_w(4)),
    ));
    v.push(orth(
        "Oe24,20,14,2",
        K::i_w(24).add(&K::i_w(20)).add(&K::i_w(14)).add(&K::i_w(2)),
    ));
    Catalog::new(v).expect("builtin catalog is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinf::FourthRoot;

    #[test]
    fn builtin_shape() {
        let cat = builtin();
        assert_eq!(cat.len(), 27);
        assert_eq!(cat.get("Delta21,9").unwrap().l_param.to_text(), "I21+I9");
        assert_eq!(cat.get("Sym2Delta11").unwrap().l_param.to_text(), "I22+eps");
        assert_eq!(cat.get("Oo24,16,8").unwrap().l_param.to_text(), "I24+I16+I8+eps");
        // 13 entries of motivic weight 23, each containing I23 exactly once.
        let w23: Vec<_> = cat
            .entries()
            .iter()
            .filter(|e| e.motivic_weight() == 23)
            .collect();
        assert_eq!(w23.len(), 13);
        for e in w23 {
            assert_eq!(e.l_param.coeff_i(23), 1);
        }
    }

    #[test]
    fn builtin_invariants() {
        let cat = builtin();
        let mut symplectic = 0;
        for e in cat.entries() {
            assert!(e.l_param.is_effective());
            assert!(e.l_param.det_is_one(), "{}", e.name);
            assert!(e.l_param.is_multiplicity_free(), "{}", e.name);
            assert!(e.self_dual);
            // Parity of the motivic weight matches the duality type.
            let expect = if e.motivic_weight() % 2 == 1 {
                DualityType::Symplectic
            } else {
                DualityType::Orthogonal
            };
            assert_eq!(e.duality_type, expect, "{}", e.name);
            if e.duality_type == DualityType::Symplectic {
                symplectic += 1;
            }
            // eps(L * L) = 1 for every entry (self-pairings are unobstructed).
            assert_eq!(
                e.l_param.mul(&e.l_param).epsilon_factor(),
                FourthRoot::ONE,
                "{}",
                e.name
            );
        }
        assert_eq!(symplectic, 22);
    }

    #[test]
    fn round_trip_and_errors() {
        let cat = builtin();
        let text = cat.to_text();
        let back = Catalog::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.entries(), cat.entries());
        // I0 in a parameter is rejected at parse time.
        assert!(Catalog::parse("X sd=1 type=S L=I0").is_err());
        // Duplicates are rejected.
        let dup = "A sd=1 type=S L=I11\nA sd=1 type=S L=I15\n";
        assert!(matches!(Catalog::parse(dup), Err(CatalogError::Duplicate(_))));
        // Single line parses to the expected entry.
        let one = Catalog::parse("Delta11 sd=1 type=S L=I11").unwrap();
        assert_eq!(one.entries()[0], cat.get("Delta11").unwrap().clone());
    }
}
