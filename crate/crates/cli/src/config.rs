//! Run configuration: surface source, collections and windows, parsed from
//! command-line flags and an optional inline surface document.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use isogenous::algebra::FinAbGroup;
use isogenous::cohomology::EquivariantLineBundle;
use isogenous::curve::CurveWithAction;
use isogenous::exceptional::CharacterRange;
use isogenous::surface::{Preset, ProductQuotientSurface};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A curve over `P¹` given by genus and one stabilizer generator per
/// branch orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineCurve {
    pub genus: u64,
    pub orbits: Vec<Vec<i64>>,
}

/// Inline surface document:
///
/// ```toml
/// group = [3, 3]
/// [curve_c]
/// genus = 4
/// orbits = [[1, 0], [0, 1], [2, 0], [0, 2]]
/// [curve_d]
/// genus = 4
/// orbits = [[1, 1], [1, 2], [2, 2], [2, 1]]
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineSurface {
    pub group: Vec<u64>,
    pub curve_c: InlineCurve,
    pub curve_d: InlineCurve,
}

impl InlineSurface {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn build(&self) -> Result<ProductQuotientSurface> {
        if self.group.contains(&0) {
            bail!("group must be finite, got cyclic orders {:?}", self.group);
        }
        let group = FinAbGroup::new(self.group.clone());
        let curve = |c: &InlineCurve, prefix: &str| -> Result<CurveWithAction> {
            let rows: Vec<&[i64]> = c.orbits.iter().map(Vec::as_slice).collect();
            CurveWithAction::over_line(c.genus, group.clone(), prefix, &rows)
                .map_err(|e| anyhow!("curve {prefix}: {e}"))
        };
        let c = curve(&self.curve_c, "E")?;
        let d = curve(&self.curve_d, "F")?;
        ProductQuotientSurface::new(c, d).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum SurfaceSource {
    Preset(String),
    Inline(InlineSurface),
}

impl SurfaceSource {
    pub fn build(&self) -> Result<ProductQuotientSurface> {
        match self {
            SurfaceSource::Preset(id) => {
                let preset = Preset::from_str(id).map_err(|e| anyhow!("{e}"))?;
                preset.surface().map_err(|e| anyhow!("{e}"))
            }
            SurfaceSource::Inline(s) => s.build(),
        }
    }
}

/// `C|D|CHI` with comma-separated integer lists, e.g. `-2,1|0|1,0`.
/// Missing coefficients are zero; an empty character is trivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub character: Vec<i64>,
}

fn int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .with_context(|| format!("not an integer: {x:?}"))
        })
        .collect()
}

impl FromStr for BundleSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        let [c, d, chi] = parts[..] else {
            bail!("bundle {s:?} must have the form C|D|CHI");
        };
        Ok(BundleSpec {
            c: int_list(c)?,
            d: int_list(d)?,
            character: int_list(chi)?,
        })
    }
}

impl BundleSpec {
    pub fn build(&self, surface: &ProductQuotientSurface) -> Result<EquivariantLineBundle> {
        let rank = surface.group().rank();
        let mut chi = self.character.clone();
        if chi.is_empty() {
            chi = vec![0; rank];
        }
        if self.c.len() > surface.c_classes().generator_count()
            || self.d.len() > surface.d_classes().generator_count()
        {
            bail!("too many coefficients in bundle {self:?}");
        }
        surface
            .bundle(&self.c, &self.d, &chi)
            .map_err(|e| anyhow!("{e}"))
    }
}

/// Character selection: `all`, `trivial`, or `;`-separated weight vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "weights", rename_all = "snake_case")]
pub enum CharacterChoice {
    All,
    Trivial,
    List(Vec<Vec<i64>>),
}

impl FromStr for CharacterChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(CharacterChoice::All),
            "trivial" => Ok(CharacterChoice::Trivial),
            list => Ok(CharacterChoice::List(
                list.split(';').map(int_list).collect::<Result<Vec<_>>>()?,
            )),
        }
    }
}

impl CharacterChoice {
    pub fn to_range(&self, surface: &ProductQuotientSurface) -> Result<CharacterRange> {
        Ok(match self {
            CharacterChoice::All => CharacterRange::All,
            CharacterChoice::Trivial => CharacterRange::Trivial,
            CharacterChoice::List(list) => CharacterRange::List(
                list.iter()
                    .map(|w| surface.group().character(w).map_err(|e| anyhow!("{e}")))
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

/// Everything that determines a report. Output format and path are sinks
/// and stay out of the hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub surface: Option<SurfaceSource>,
    pub bundles: Vec<BundleSpec>,
    pub characters: Option<CharacterChoice>,
    pub window: Option<i64>,
    pub length: Option<usize>,
    pub scan_bound: Option<i64>,
    pub torsion: Option<(u64, u64)>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            surface: None,
            bundles: Vec::new(),
            characters: None,
            window: None,
            length: None,
            scan_bound: None,
            torsion: None,
        }
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&serde_json::to_value(self).expect("config serializes"))
            .expect("value serializes");
        Sha256::digest(&canonical)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_specs() {
        let b: BundleSpec = "-2,1|0|1,0".parse().unwrap();
        assert_eq!(b.c, vec![-2, 1]);
        assert_eq!(b.d, vec![0]);
        assert_eq!(b.character, vec![1, 0]);
        let e: BundleSpec = "||".parse().unwrap();
        assert!(e.c.is_empty() && e.character.is_empty());
        assert!("1,2|3".parse::<BundleSpec>().is_err());
        assert!("x||".parse::<BundleSpec>().is_err());
    }

    #[test]
    fn character_choices() {
        assert_eq!(
            "all".parse::<CharacterChoice>().unwrap(),
            CharacterChoice::All
        );
        assert_eq!(
            "0,0;1,2".parse::<CharacterChoice>().unwrap(),
            CharacterChoice::List(vec![vec![0, 0], vec![1, 2]])
        );
    }

    #[test]
    fn inline_copy_of_a_preset_is_recognized() {
        let doc = r#"
            group = [3, 3]
            [curve_c]
            genus = 4
            orbits = [[1, 0], [0, 1], [2, 0], [0, 2]]
            [curve_d]
            genus = 4
            orbits = [[1, 1], [1, 2], [2, 2], [2, 1]]
        "#;
        let inline: InlineSurface = toml::from_str(doc).unwrap();
        let s = inline.build().unwrap();
        assert_eq!(s.preset(), Some(Preset::Z3Squared));
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let mut a = RunConfig::new("search");
        a.window = Some(2);
        let b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let mut c = a.clone();
        c.window = Some(1);
        assert_ne!(a.hash(), c.hash());
    }
}
