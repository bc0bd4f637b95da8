//! The `name:key=value,...` grammar for state and channel specs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use absreg::channels::{self, ChannelKind, Sidedness};
use absreg::states::{self, DensityMatrix};

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{input:?} at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub expected: String,
    pub found: String,
}

/// A parsed spec: lower-cased name plus numeric parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Spec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    /// Parameters given as words rather than numbers (e.g. `side=single`).
    pub words: BTreeMap<String, String>,
}

fn found_at(input: &str, pos: usize) -> String {
    match input[pos..].chars().next() {
        Some(c) => format!("{c:?}"),
        None => "end of input".into(),
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

pub fn parse_spec(input: &str) -> Result<Spec, ParseError> {
    let err = |position: usize, expected: &str| ParseError {
        input: input.to_string(),
        position,
        expected: expected.to_string(),
        found: found_at(input, position),
    };
    let name_end = input.find(|c: char| !is_name_char(c)).unwrap_or(input.len());
    if name_end == 0 {
        return Err(err(0, "a spec name"));
    }
    let name = input[..name_end].to_ascii_lowercase().replace('_', "-");
    let mut spec = Spec {
        name,
        params: BTreeMap::new(),
        words: BTreeMap::new(),
    };
    if name_end == input.len() {
        return Ok(spec);
    }
    if !input[name_end..].starts_with(':') {
        return Err(err(name_end, "':' or end of input"));
    }
    let mut pos = name_end + 1;
    loop {
        let key_end = input[pos..]
            .find(|c: char| !is_name_char(c))
            .map_or(input.len(), |i| pos + i);
        if key_end == pos {
            return Err(err(pos, "a parameter name"));
        }
        let key = input[pos..key_end].to_ascii_lowercase();
        if !input[key_end..].starts_with('=') {
            return Err(err(key_end, "'='"));
        }
        let value_start = key_end + 1;
        let value_end = input[value_start..].find(',').map_or(input.len(), |i| value_start + i);
        let raw = input[value_start..value_end].trim();
        if raw.is_empty() {
            return Err(err(value_start, "a value"));
        }
        if spec.params.contains_key(&key) || spec.words.contains_key(&key) {
            return Err(err(pos, "a parameter not given before"));
        }
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                spec.params.insert(key, v);
            }
            Ok(_) => return Err(err(value_start, "a finite number")),
            Err(_) if raw.chars().all(is_name_char) && raw.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                spec.words.insert(key, raw.to_ascii_lowercase());
            }
            Err(_) => return Err(err(value_start, "a number or a word")),
        }
        if value_end == input.len() {
            return Ok(spec);
        }
        pos = value_end + 1;
    }
}

/// Problem with a well-formed spec: unknown name, missing or unknown keys,
/// or a value the library rejects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("unknown {what} {name:?}; expected one of: {expected}")]
    UnknownName {
        what: &'static str,
        name: String,
        expected: String,
    },
    #[error("{name}: missing parameter {key:?}")]
    Missing { name: String, key: String },
    #[error("{name}: unexpected parameter {key:?} (allowed: {allowed})")]
    Unexpected { name: String, key: String, allowed: String },
    #[error("{name}: {source}")]
    Invalid {
        name: String,
        #[source]
        source: absreg::Error,
    },
}

struct Reader<'a> {
    spec: &'a Spec,
    allowed: &'a [&'a str],
}

impl<'a> Reader<'a> {
    fn new(spec: &'a Spec, allowed: &'a [&'a str]) -> Result<Self, SpecError> {
        for key in spec.params.keys().chain(spec.words.keys()) {
            if !allowed.contains(&key.as_str()) {
                return Err(SpecError::Unexpected {
                    name: spec.name.clone(),
                    key: key.clone(),
                    allowed: if allowed.is_empty() { "none".into() } else { allowed.join(", ") },
                });
            }
        }
        Ok(Self { spec, allowed })
    }

    fn get(&self, key: &str) -> Result<f64, SpecError> {
        debug_assert!(self.allowed.contains(&key));
        self.spec.params.get(key).copied().ok_or_else(|| SpecError::Missing {
            name: self.spec.name.clone(),
            key: key.into(),
        })
    }

    fn opt(&self, key: &str) -> Option<f64> {
        self.spec.params.get(key).copied()
    }

    fn index(&self, key: &str) -> Result<usize, SpecError> {
        let v = self.get(key)?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(self.invalid(absreg::Error::OutOfRange {
                name: "index",
                value: v,
                allowed: "a non-negative integer",
            }));
        }
        Ok(v as usize)
    }

    /// Local dimension, capped so the dense eigensolver stays fast.
    fn local_dim(&self) -> Result<usize, SpecError> {
        let d = self.index("d")?;
        if !(2..=MAX_LOCAL_DIM).contains(&d) {
            return Err(self.invalid(absreg::Error::OutOfRange {
                name: "d",
                value: d as f64,
                allowed: "2 <= d <= 8",
            }));
        }
        Ok(d)
    }

    fn invalid(&self, source: absreg::Error) -> SpecError {
        SpecError::Invalid {
            name: self.spec.name.clone(),
            source,
        }
    }

    fn check<T>(&self, r: absreg::Result<T>) -> Result<T, SpecError> {
        r.map_err(|e| self.invalid(e))
    }
}

pub const MAX_LOCAL_DIM: usize = 8;

pub const STATE_NAMES: &str =
    "pure-schmidt, depolarized-schmidt, acin, iso, bell, mixed, weyl-diag, ghzw, ghz, w, tripartite";

/// Build a state from its spec.
pub fn build_state(spec: &Spec) -> Result<DensityMatrix, SpecError> {
    match spec.name.as_str() {
        "pure-schmidt" => {
            let r = Reader::new(spec, &["theta"])?;
            Ok(states::pure_schmidt(r.get("theta")?))
        }
        "depolarized-schmidt" => {
            let r = Reader::new(spec, &["theta", "p"])?;
            r.check(states::depolarized_schmidt(r.get("theta")?, r.get("p")?))
        }
        "acin" => {
            let r = Reader::new(spec, &["lambda", "theta"])?;
            r.check(states::acin_two_param(r.get("lambda")?, r.get("theta")?))
        }
        "iso" | "isotropic" => {
            let r = Reader::new(spec, &["d", "beta"])?;
            let d = r.local_dim()?;
            r.check(states::isotropic(d, r.get("beta")?))
        }
        "bell" => {
            let r = Reader::new(spec, &["index"])?;
            r.check(states::bell_state(r.index("index")?))
        }
        "mixed" => {
            let r = Reader::new(spec, &["d", "parties"])?;
            let d = r.local_dim()?;
            let parties = r.opt("parties").unwrap_or(2.0);
            if !(parties == 2.0 || (parties == 3.0 && d <= 4)) {
                return Err(r.invalid(absreg::Error::OutOfRange {
                    name: "parties",
                    value: parties,
                    allowed: "2, or 3 with d <= 4",
                }));
            }
            Ok(DensityMatrix::maximally_mixed(vec![d; parties as usize]))
        }
        "weyl-diag" => {
            let keys = ["w0", "w1", "w2", "w3"];
            let r = Reader::new(spec, &keys)?;
            let w = keys.iter().map(|k| r.get(k)).collect::<Result<Vec<_>, _>>()?;
            r.check(states::weyl_diagonal(2, &w))
        }
        "ghzw" => {
            let r = Reader::new(spec, &["p"])?;
            r.check(states::ghz_w_mix(r.get("p")?))
        }
        "ghz" => {
            Reader::new(spec, &[])?;
            Ok(DensityMatrix::from_pure(&states::ghz_ket(), vec![2, 2, 2]).expect("GHZ is normalised"))
        }
        "w" => {
            Reader::new(spec, &[])?;
            Ok(DensityMatrix::from_pure(&states::w_ket(), vec![2, 2, 2]).expect("W is normalised"))
        }
        "tripartite" => {
            let keys = ["x0", "x1", "x2", "x3", "x4", "theta"];
            let r = Reader::new(spec, &keys)?;
            let mut x = [0.0; 5];
            for (slot, key) in x.iter_mut().zip(&keys) {
                *slot = r.get(key)?;
            }
            r.check(states::acin_tripartite(x, r.get("theta")?))
        }
        other => Err(SpecError::UnknownName {
            what: "state",
            name: other.into(),
            expected: STATE_NAMES.into(),
        }),
    }
}

/// A channel to apply to a bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// `(1−p)ρ + p·I/D`.
    Global { p: f64 },
    /// A qubit channel with parameter `p1` on A and `p2` on B, or on A only.
    Local { kind: ChannelKind, p1: f64, p2: f64, sidedness: Sidedness },
}

pub const CHANNEL_NAMES: &str =
    "global-depolarizing, phase-flip, bit-flip, phase-damping, amplitude-damping, depolarizing";

pub fn build_channel(spec: &Spec) -> Result<ChannelSpec, SpecError> {
    if spec.name == "global-depolarizing" {
        let r = Reader::new(spec, &["p"])?;
        let p = r.get("p")?;
        r.check(states::check_closed("p", p, 0.0, 1.0, "[0, 1]"))?;
        return Ok(ChannelSpec::Global { p });
    }
    let kind: ChannelKind = spec.name.parse().map_err(|_| SpecError::UnknownName {
        what: "channel",
        name: spec.name.clone(),
        expected: CHANNEL_NAMES.into(),
    })?;
    let r = Reader::new(spec, &["p", "p1", "p2", "side"])?;
    let sidedness = match spec.words.get("side").map(String::as_str) {
        None | Some("double") => Sidedness::Double,
        Some("single") => Sidedness::Single,
        Some(other) => {
            return Err(SpecError::Unexpected {
                name: spec.name.clone(),
                key: format!("side={other}"),
                allowed: "side=single, side=double".into(),
            })
        }
    };
    let (p1, p2) = match (r.opt("p"), r.opt("p1"), r.opt("p2")) {
        (Some(p), None, None) => (p, p),
        (None, Some(a), Some(b)) => (a, b),
        (None, Some(a), None) if sidedness == Sidedness::Single => (a, 0.0),
        (None, None, None) => return Err(SpecError::Missing { name: spec.name.clone(), key: "p".into() }),
        _ => {
            return Err(SpecError::Unexpected {
                name: spec.name.clone(),
                key: "p with p1/p2".into(),
                allowed: "either p, or p1 and p2".into(),
            })
        }
    };
    if sidedness == Sidedness::Single && p2 != p1 && r.opt("p2").is_some() {
        return Err(SpecError::Unexpected {
            name: spec.name.clone(),
            key: "p2".into(),
            allowed: "p or p1 with side=single".into(),
        });
    }
    r.check(channels::make_channel(kind, p1))?;
    r.check(channels::make_channel(kind, p2))?;
    Ok(ChannelSpec::Local { kind, p1, p2, sidedness })
}

impl ChannelSpec {
    pub fn apply(&self, rho: &DensityMatrix) -> absreg::Result<DensityMatrix> {
        match *self {
            ChannelSpec::Global { p } => channels::global_depolarize(rho, p),
            ChannelSpec::Local { kind, p1, p2, sidedness } => {
                let a = channels::make_channel(kind, p1)?;
                match sidedness {
                    Sidedness::Single => channels::apply_local(&a, rho, 0),
                    Sidedness::Double => channels::double_apply(&a, &channels::make_channel(kind, p2)?, rho),
                }
            }
        }
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        let mut parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(self.words.iter().map(|(k, v)| format!("{k}={v}")));
        if !parts.is_empty() {
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}
