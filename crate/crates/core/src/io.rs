//! Group specs, cocycle rule files and result files.
//!
//! Documents are JSON with a fixed key order. Group elements of `G` are written
//! as canonical word labels (generator names joined by `.`, `1` for the
//! identity); elements of `H` use the target oracle's labels; patterns are
//! symbol strings in canonical site order.

use std::path::Path as FsPath;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::cayley::{Ball, CayleyExplorer};
use crate::cocycle::{LocalCocycle, Rule, TABLE_CAP};
use crate::error::{Error, Result};
use crate::group::{Cyclic, Element, Free, Lattice, Product, SharedGroup, Symmetric};
use crate::rigidity::{
    CohomologyFailure, CohomologyReport, NValue, ObstructionDetails, ObstructionKind,
    ObstructionWitness, PhiReport, PhiTable, RigidityResult, SweepSummary, TransferTable,
};
use crate::shift::{Alphabet, Configuration, PatternSpace, Symbol};

pub const FORMAT_VERSION: u32 = 1;

/// Parses `atom (" x " atom)*` with atoms `Z^d`, `F(k)`, `C(n)`, `S(n)`.
pub fn parse_group(spec: &str) -> Result<SharedGroup> {
    let mut factors = Vec::new();
    let mut pos = 0;
    for (i, part) in spec.split(" x ").enumerate() {
        if i > 0 {
            pos += " x ".len();
        }
        factors.push(parse_atom(part, pos)?);
        pos += part.len();
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Arc::new(Product::new(factors))
    })
}

fn parse_atom(atom: &str, pos: usize) -> Result<SharedGroup> {
    let number = |digits: &str, at: usize| -> Result<u64> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                pos: at,
                msg: format!("expected a decimal number in `{atom}`"),
            });
        }
        digits.parse().map_err(|_| Error::Parse {
            pos: at,
            msg: format!("number out of range in `{atom}`"),
        })
    };
    if atom.is_empty() {
        return Err(Error::Parse {
            pos,
            msg: "expected a group atom".into(),
        });
    }
    if let Some(rest) = atom.strip_prefix("Z^") {
        let d = number(rest, pos + 2)?;
        if d == 0 || d > 8 {
            return Err(Error::UnsupportedAtom(atom.to_string()));
        }
        return Ok(Arc::new(Lattice::new(d as usize)));
    }
    let (head, rest) = atom.split_at(1);
    let Some(inner) = rest.strip_prefix('(') else {
        return if matches!(head, "F" | "C" | "S" | "Z") {
            Err(Error::Parse {
                pos: pos + 1,
                msg: format!("expected `(` or `^` in `{atom}`"),
            })
        } else {
            Err(Error::UnsupportedAtom(atom.to_string()))
        };
    };
    let Some(digits) = inner.strip_suffix(')') else {
        return Err(Error::Parse {
            pos: pos + atom.len(),
            msg: format!("expected `)` to close `{atom}`"),
        });
    };
    let n = number(digits, pos + 2)?;
    match head {
        "F" => Ok(Arc::new(Free::new(n as usize)?)),
        "C" => Ok(Arc::new(Cyclic::new(n)?)),
        "S" => Ok(Arc::new(Symmetric::new(n as usize)?)),
        _ => Err(Error::UnsupportedAtom(atom.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetDoc {
    pub symbols: Vec<String>,
    pub zero: String,
}

impl AlphabetDoc {
    pub fn from_alphabet(a: &Alphabet) -> Self {
        AlphabetDoc {
            symbols: a.names(),
            zero: a.name(a.zero()).to_string(),
        }
    }

    pub fn to_alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(&self.symbols, &self.zero)
    }
}

/// One positive generator's rule: a complete table or a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDocument {
    pub version: u32,
    pub group: String,
    pub target: String,
    pub alphabet: AlphabetDoc,
    pub window: u32,
    /// Keyed by positive generator name, in declaration order.
    pub rules: IndexMap<String, RuleDoc>,
}

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Version {
            found,
            expected: FORMAT_VERSION,
        });
    }
    Ok(())
}

fn parse_h(h: &SharedGroup, label: &str) -> Result<Element> {
    let e = h.parse_label(label)?;
    if h.label(&e) != label {
        return Err(Error::label(
            label,
            format!("not canonical, expected `{}`", h.label(&e)),
        ));
    }
    Ok(e)
}

impl CocycleDocument {
    pub fn from_cocycle(c: &LocalCocycle) -> Result<Self> {
        let ex = c.explorer();
        let g = c.source();
        let h = c.target();
        let names = g.generator_names();
        let ball = ex.ensure(c.window())?;
        let space = c.pattern_space();
        let mut rules = IndexMap::new();
        for (k, rule) in c.rules().iter().enumerate() {
            let name = names[ex.positive_generators()[k]].clone();
            let doc = match rule {
                Rule::Table(values) => RuleDoc {
                    table: Some(
                        values
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                (
                                    c.alphabet().pattern_string(&space.pattern_at(i)),
                                    h.label(v),
                                )
                            })
                            .collect(),
                    ),
                    form: None,
                    weights: None,
                },
                Rule::WeightedSiteSum(weights) => RuleDoc {
                    table: None,
                    form: Some("weighted-site-sum".into()),
                    weights: Some(
                        weights
                            .iter()
                            .map(|(m, w)| (ex.format_word(&ball.word(*m)), h.label(w)))
                            .collect(),
                    ),
                },
            };
            rules.insert(name, doc);
        }
        Ok(CocycleDocument {
            version: FORMAT_VERSION,
            group: g.spec(),
            target: h.spec(),
            alphabet: AlphabetDoc::from_alphabet(c.alphabet()),
            window: c.window(),
            rules,
        })
    }

    /// Builds the cocycle on a fresh explorer.
    pub fn to_cocycle(&self) -> Result<LocalCocycle> {
        let g = parse_group(&self.group)?;
        let explorer = Arc::new(CayleyExplorer::new(g)?);
        self.to_cocycle_on(explorer)
    }

    /// Builds the cocycle on an existing explorer for the same group.
    pub fn to_cocycle_on(&self, explorer: Arc<CayleyExplorer>) -> Result<LocalCocycle> {
        check_version(self.version)?;
        if explorer.oracle().spec() != self.group {
            return Err(Error::Document(format!(
                "explorer group {} does not match document group {}",
                explorer.oracle().spec(),
                self.group
            )));
        }
        let h = parse_group(&self.target)?;
        let alphabet = self.alphabet.to_alphabet()?;
        let names = explorer.oracle().generator_names().to_vec();
        let positive: Vec<String> = explorer
            .positive_generators()
            .iter()
            .map(|&p| names[p].clone())
            .collect();
        let keys: Vec<&String> = self.rules.keys().collect();
        if keys != positive.iter().collect::<Vec<_>>() {
            return Err(Error::Document(format!(
                "rules must be given for the positive generators [{}] in order",
                positive.join(", ")
            )));
        }
        let ball = explorer.ensure(self.window)?;
        let sites = ball.ball_len(self.window);
        let space = PatternSpace::new(alphabet.size(), sites);
        let mut rules = Vec::new();
        for (name, doc) in &self.rules {
            let rule = match (&doc.table, doc.form.as_deref(), &doc.weights) {
                (Some(table), None, None) => {
                    let count = space.check_cap(TABLE_CAP)?;
                    let mut values = Vec::with_capacity(count as usize);
                    for i in 0..count as usize {
                        let key = alphabet.pattern_string(&space.pattern_at(i));
                        let label = table.get(&key).ok_or_else(|| Error::Incomplete {
                            generator: name.clone(),
                            pattern: key.clone(),
                        })?;
                        values.push(parse_h(&h, label)?);
                    }
                    if table.len() as u64 != count {
                        let extra = table
                            .keys()
                            .find(|k| alphabet.parse_pattern(k, sites).is_err())
                            .cloned()
                            .unwrap_or_default();
                        return Err(Error::Document(format!(
                            "rule `{name}` has an entry for `{extra}`, which is not a pattern on B({})",
                            self.window
                        )));
                    }
                    Rule::Table(values)
                }
                (None, Some("weighted-site-sum"), Some(weights)) => {
                    let mut ws = Vec::new();
                    for (site, label) in weights {
                        let g = explorer.parse_word_label(site)?;
                        let m = ball
                            .index_of(&g)
                            .filter(|&m| m < sites)
                            .ok_or_else(|| Error::label(site, "site is outside B(L)"))?;
                        ws.push((m, parse_h(&h, label)?));
                    }
                    ws.sort_by_key(|w| w.0);
                    Rule::WeightedSiteSum(ws)
                }
                (None, Some(form), _) => {
                    return Err(Error::Document(format!("unknown rule form `{form}`")))
                }
                _ => {
                    return Err(Error::Document(format!(
                        "rule `{name}` needs either `table` or `form` with `weights`"
                    )))
                }
            };
            rules.push(rule);
        }
        LocalCocycle::new(explorer, h, alphabet, self.window, rules)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CocycleDocument = serde_json::from_str(s)?;
        check_version(doc.version)?;
        Ok(doc)
    }
}

pub fn load_cocycle(path: impl AsRef<FsPath>) -> Result<LocalCocycle> {
    CocycleDocument::from_json(&std::fs::read_to_string(path)?)?.to_cocycle()
}

pub fn save_cocycle(c: &LocalCocycle, path: impl AsRef<FsPath>) -> Result<()> {
    std::fs::write(path, CocycleDocument::from_cocycle(c)?.to_json()?)?;
    Ok(())
}

/// A configuration as a default symbol plus overrides keyed by word label, in
/// canonical site order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationDoc {
    pub default: String,
    pub overrides: IndexMap<String, String>,
}

/// Label conversions shared by the result document.
struct Codec<'a> {
    explorer: &'a CayleyExplorer,
    target: &'a SharedGroup,
    alphabet: &'a Alphabet,
}

impl Codec<'_> {
    fn g(&self, e: &Element) -> Result<String> {
        self.explorer.word_label(e)
    }

    fn parse_g(&self, s: &str) -> Result<Element> {
        self.explorer.parse_word_label(s)
    }

    fn h(&self, e: &Element) -> String {
        self.target.label(e)
    }

    fn parse_h(&self, s: &str) -> Result<Element> {
        parse_h(self.target, s)
    }

    fn sym(&self, s: Symbol) -> String {
        self.alphabet.name(s).to_string()
    }

    fn parse_sym(&self, s: &str) -> Result<Symbol> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => self.alphabet.symbol(c),
            _ => None,
        }
        .ok_or_else(|| Error::label(s, "not a symbol"))
    }

    fn pattern(&self, p: &[Symbol]) -> String {
        self.alphabet.pattern_string(p)
    }

    fn parse_pattern(&self, s: &str, len: usize) -> Result<Vec<Symbol>> {
        self.alphabet.parse_pattern(s, len)
    }

    fn config(&self, x: &Configuration) -> Result<ConfigurationDoc> {
        let mut entries = Vec::new();
        for (g, &s) in x.overrides() {
            let (ball, i) = self.explorer.locate(g)?;
            entries.push((i, self.explorer.format_word(&ball.word(i)), s));
        }
        entries.sort_by_key(|e| e.0);
        Ok(ConfigurationDoc {
            default: self.sym(x.default_symbol()),
            overrides: entries
                .into_iter()
                .map(|(_, label, s)| (label, self.sym(s)))
                .collect(),
        })
    }

    fn parse_config(&self, doc: &ConfigurationDoc) -> Result<Configuration> {
        let mut overrides = Vec::new();
        for (site, s) in &doc.overrides {
            overrides.push((self.parse_g(site)?, self.parse_sym(s)?));
        }
        Ok(Configuration::new(self.parse_sym(&doc.default)?, overrides))
    }

    fn obstruction(&self, w: &ObstructionWitness) -> Result<ObstructionDoc> {
        Ok(ObstructionDoc {
            kind: w.kind.as_str().to_string(),
            x: self.config(&w.x)?,
            details: match &w.details {
                ObstructionDetails::Conflict {
                    first,
                    second,
                    first_value,
                    second_value,
                    avoiding_path,
                } => DetailsDoc::Conflict {
                    first: self.g(first)?,
                    second: self.g(second)?,
                    first_value: self.h(first_value),
                    second_value: self.h(second_value),
                    avoiding_path: *avoiding_path,
                },
                ObstructionDetails::Locality {
                    y,
                    x_value,
                    y_value,
                } => DetailsDoc::Locality {
                    y: self.config(y)?,
                    x_value: self.h(x_value),
                    y_value: self.h(y_value),
                },
                ObstructionDetails::Disconnected {
                    from,
                    to,
                    radius,
                    cutoff,
                } => DetailsDoc::Disconnected {
                    from: self.g(from)?,
                    to: self.g(to)?,
                    radius: *radius,
                    cutoff: *cutoff,
                },
            },
        })
    }

    fn parse_obstruction(&self, o: &ObstructionDoc) -> Result<ObstructionWitness> {
        let kind = ObstructionKind::parse(&o.kind)
            .ok_or_else(|| Error::Document(format!("unknown obstruction kind `{}`", o.kind)))?;
        let details = match &o.details {
            DetailsDoc::Conflict {
                first,
                second,
                first_value,
                second_value,
                avoiding_path,
            } => ObstructionDetails::Conflict {
                first: self.parse_g(first)?,
                second: self.parse_g(second)?,
                first_value: self.parse_h(first_value)?,
                second_value: self.parse_h(second_value)?,
                avoiding_path: *avoiding_path,
            },
            DetailsDoc::Locality {
                y,
                x_value,
                y_value,
            } => ObstructionDetails::Locality {
                y: self.parse_config(y)?,
                x_value: self.parse_h(x_value)?,
                y_value: self.parse_h(y_value)?,
            },
            DetailsDoc::Disconnected {
                from,
                to,
                radius,
                cutoff,
            } => ObstructionDetails::Disconnected {
                from: self.parse_g(from)?,
                to: self.parse_g(to)?,
                radius: *radius,
                cutoff: *cutoff,
            },
        };
        Ok(ObstructionWitness {
            kind,
            x: self.parse_config(&o.x)?,
            details,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NValueDoc {
    pub r: u32,
    pub n: u32,
    pub cutoff: u32,
    pub unbounded: usize,
    pub caveat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiDoc {
    pub radius: u32,
    pub entries: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferDoc {
    pub radius: u32,
    pub support_radius: u32,
    pub complete: bool,
    /// Keyed by the full `B(radius)` pattern.
    pub entries: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiFailureDoc {
    pub g: String,
    pub h: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiReportDoc {
    pub radius: u32,
    pub checked: u64,
    pub failures: Vec<PhiFailureDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub configurations: u64,
    pub comparisons: u64,
    pub seed: u64,
    pub witness: Option<ObstructionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyFailureDoc {
    pub g: String,
    pub window_radius: u32,
    pub window: String,
    pub default: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyDoc {
    pub radius: u32,
    pub configurations: u64,
    pub checked: u64,
    pub exhaustive: bool,
    pub seed: u64,
    pub failure_count: u64,
    pub failures: Vec<CohomologyFailureDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub phi_homomorphism: PhiReportDoc,
    pub independence: SweepDoc,
    pub locality: SweepDoc,
    pub cohomology: CohomologyDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "type")]
pub enum DetailsDoc {
    Conflict {
        first: String,
        second: String,
        first_value: String,
        second_value: String,
        avoiding_path: bool,
    },
    Locality {
        y: ConfigurationDoc,
        x_value: String,
        y_value: String,
    },
    Disconnected {
        from: String,
        to: String,
        radius: u32,
        cutoff: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionDoc {
    pub kind: String,
    pub x: ConfigurationDoc,
    pub details: DetailsDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub version: u32,
    pub group: String,
    pub target: String,
    pub alphabet: AlphabetDoc,
    pub window: u32,
    pub n_values: Vec<NValueDoc>,
    pub phi: PhiDoc,
    pub b_table: TransferDoc,
    pub report: ReportDoc,
    pub obstruction: Option<ObstructionDoc>,
}

fn sweep_doc(codec: &Codec<'_>, s: &SweepSummary) -> Result<SweepDoc> {
    Ok(SweepDoc {
        configurations: s.configurations,
        comparisons: s.comparisons,
        seed: s.seed,
        witness: s
            .witness
            .as_ref()
            .map(|w| codec.obstruction(w))
            .transpose()?,
    })
}

fn ensure_ball(ex: &CayleyExplorer, r: u32) -> Result<Arc<Ball>> {
    ex.ensure(r)
}

impl ResultDocument {
    pub fn from_result(c: &LocalCocycle, r: &RigidityResult) -> Result<Self> {
        let ex = c.explorer();
        let codec = Codec {
            explorer: ex,
            target: c.target(),
            alphabet: c.alphabet(),
        };
        let ball = ensure_ball(ex, r.phi.radius.max(r.b_table.radius))?;
        let phi = PhiDoc {
            radius: r.phi.radius,
            entries: r
                .phi
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| (ex.format_word(&ball.word(i)), codec.h(v)))
                .collect(),
        };
        let b_table = TransferDoc {
            radius: r.b_table.radius,
            support_radius: r.b_table.support_radius,
            complete: r.b_table.complete,
            entries: r
                .b_table
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    (
                        codec.pattern(&r.b_table.pattern(c.alphabet(), i)),
                        codec.h(v),
                    )
                })
                .collect(),
        };
        let phi_homomorphism = PhiReportDoc {
            radius: r.phi_report.radius,
            checked: r.phi_report.checked,
            failures: r
                .phi_report
                .failures
                .iter()
                .map(|(g, h, left, right)| {
                    Ok(PhiFailureDoc {
                        g: codec.g(g)?,
                        h: codec.g(h)?,
                        left: codec.h(left),
                        right: codec.h(right),
                    })
                })
                .collect::<Result<_>>()?,
        };
        let v = &r.verification;
        let cohomology = CohomologyDoc {
            radius: v.radius,
            configurations: v.configurations,
            checked: v.checked,
            exhaustive: v.exhaustive,
            seed: v.seed,
            failure_count: v.failure_count,
            failures: v
                .failures
                .iter()
                .map(|f| {
                    Ok(CohomologyFailureDoc {
                        g: codec.g(&f.g)?,
                        window_radius: f.window_radius,
                        window: codec.pattern(&f.window),
                        default: codec.sym(f.default),
                        left: codec.h(&f.left),
                        right: codec.h(&f.right),
                    })
                })
                .collect::<Result<_>>()?,
        };
        let obstruction = r
            .obstruction
            .as_ref()
            .map(|w| codec.obstruction(w))
            .transpose()?;
        Ok(ResultDocument {
            version: FORMAT_VERSION,
            group: c.source().spec(),
            target: c.target().spec(),
            alphabet: AlphabetDoc::from_alphabet(c.alphabet()),
            window: r.window,
            n_values: r
                .n_values
                .iter()
                .map(|n| NValueDoc {
                    r: n.r,
                    n: n.n,
                    cutoff: n.cutoff,
                    unbounded: n.unbounded,
                    caveat: n.caveat,
                })
                .collect(),
            phi,
            b_table,
            report: ReportDoc {
                phi_homomorphism,
                independence: sweep_doc(&codec, &r.independence)?,
                locality: sweep_doc(&codec, &r.locality)?,
                cohomology,
            },
            obstruction,
        })
    }

    fn check_matches(&self, c: &LocalCocycle) -> Result<()> {
        check_version(self.version)?;
        let alphabet = AlphabetDoc::from_alphabet(c.alphabet());
        if self.group != c.source().spec()
            || self.target != c.target().spec()
            || self.alphabet != alphabet
            || self.window != c.window()
        {
            return Err(Error::Document(
                "result was produced for a different group, target, alphabet or window".into(),
            ));
        }
        Ok(())
    }

    /// The stored `phi` table.
    pub fn phi_table(&self, c: &LocalCocycle) -> Result<PhiTable> {
        self.check_matches(c)?;
        let ex = c.explorer();
        let ball = ensure_ball(ex, self.phi.radius)?;
        let n = ball.ball_len(self.phi.radius);
        if self.phi.entries.len() != n {
            return Err(Error::Document(format!(
                "phi table must have {n} entries, one per element of B({})",
                self.phi.radius
            )));
        }
        let mut values = Vec::with_capacity(n);
        for (i, (key, label)) in self.phi.entries.iter().enumerate() {
            let expected = ex.format_word(&ball.word(i));
            if *key != expected {
                return Err(Error::Document(format!(
                    "phi entry {i} is keyed `{key}`, expected `{expected}`"
                )));
            }
            values.push(parse_h(c.target(), label)?);
        }
        Ok(PhiTable {
            radius: self.phi.radius,
            values,
        })
    }

    /// The stored transfer table.
    pub fn transfer_table(&self, c: &LocalCocycle) -> Result<TransferTable> {
        self.check_matches(c)?;
        let t = &self.b_table;
        let alphabet = c.alphabet();
        let ball = ensure_ball(c.explorer(), t.radius)?;
        if t.radius != 3 * c.window() || t.support_radius > t.radius {
            return Err(Error::Document(
                "transfer table radii are inconsistent".into(),
            ));
        }
        let sites = ball.ball_len(t.radius);
        let support_sites = ball.ball_len(t.support_radius);
        let count = PatternSpace::new(alphabet.size(), support_sites).check_cap(TABLE_CAP)?;
        if t.entries.len() as u64 != count || t.complete != (t.support_radius == t.radius) {
            return Err(Error::Document(format!(
                "transfer table must have {count} entries for support radius {}",
                t.support_radius
            )));
        }
        let mut table = TransferTable {
            radius: t.radius,
            sites,
            support_radius: t.support_radius,
            support_sites,
            complete: t.complete,
            values: Vec::with_capacity(count as usize),
        };
        for (i, (key, label)) in t.entries.iter().enumerate() {
            let expected = alphabet.pattern_string(&table.pattern(alphabet, i));
            if *key != expected {
                return Err(Error::Document(format!(
                    "transfer entry {i} is keyed `{key}`, expected `{expected}`"
                )));
            }
            table.values.push(parse_h(c.target(), label)?);
        }
        Ok(table)
    }

    /// Reconstructs the in-memory result.
    pub fn to_result(&self, c: &LocalCocycle) -> Result<RigidityResult> {
        let phi = self.phi_table(c)?;
        let b_table = self.transfer_table(c)?;
        let ex = c.explorer();
        let codec = Codec {
            explorer: ex,
            target: c.target(),
            alphabet: c.alphabet(),
        };
        let rep = &self.report;
        let phi_report = PhiReport {
            radius: rep.phi_homomorphism.radius,
            checked: rep.phi_homomorphism.checked,
            failures: rep
                .phi_homomorphism
                .failures
                .iter()
                .map(|f| {
                    Ok((
                        codec.parse_g(&f.g)?,
                        codec.parse_g(&f.h)?,
                        codec.parse_h(&f.left)?,
                        codec.parse_h(&f.right)?,
                    ))
                })
                .collect::<Result<_>>()?,
        };
        let obstruction = self
            .obstruction
            .as_ref()
            .map(|o| codec.parse_obstruction(o))
            .transpose()?;
        let sweep = |d: &SweepDoc| -> Result<SweepSummary> {
            Ok(SweepSummary {
                configurations: d.configurations,
                comparisons: d.comparisons,
                seed: d.seed,
                witness: d
                    .witness
                    .as_ref()
                    .map(|o| codec.parse_obstruction(o))
                    .transpose()?,
            })
        };
        let independence = sweep(&rep.independence)?;
        let locality = sweep(&rep.locality)?;
        let ch = &rep.cohomology;
        let mut failures = Vec::new();
        for f in &ch.failures {
            let g = codec.parse_g(&f.g)?;
            let ball = ensure_ball(ex, f.window_radius)?;
            failures.push(CohomologyFailure {
                g,
                window_radius: f.window_radius,
                window: codec.parse_pattern(&f.window, ball.ball_len(f.window_radius))?,
                default: codec.parse_sym(&f.default)?,
                left: codec.parse_h(&f.left)?,
                right: codec.parse_h(&f.right)?,
            });
        }
        Ok(RigidityResult {
            window: self.window,
            n_values: self
                .n_values
                .iter()
                .map(|n| NValue {
                    r: n.r,
                    n: n.n,
                    cutoff: n.cutoff,
                    unbounded: n.unbounded,
                    caveat: n.caveat,
                })
                .collect(),
            phi,
            phi_report,
            independence,
            b_table,
            locality,
            verification: CohomologyReport {
                radius: ch.radius,
                configurations: ch.configurations,
                checked: ch.checked,
                exhaustive: ch.exhaustive,
                seed: ch.seed,
                failure_count: ch.failure_count,
                failures,
            },
            obstruction,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        if let Some(v) = value.get("version").and_then(|v| v.as_u64()) {
            check_version(v as u32)?;
        }
        Ok(serde_json::from_value(value)?)
    }
}

pub fn save_result(
    c: &LocalCocycle,
    result: &RigidityResult,
    path: impl AsRef<FsPath>,
) -> Result<()> {
    std::fs::write(path, ResultDocument::from_result(c, result)?.to_json()?)?;
    Ok(())
}

pub fn load_result(path: impl AsRef<FsPath>) -> Result<ResultDocument> {
    ResultDocument::from_json(&std::fs::read_to_string(path)?)
}

/// Encodes a configuration with word-label sites.
pub fn configuration_doc(
    explorer: &CayleyExplorer,
    alphabet: &Alphabet,
    target: &SharedGroup,
    x: &Configuration,
) -> Result<ConfigurationDoc> {
    Codec {
        explorer,
        target,
        alphabet,
    }
    .config(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::make_hom_cocycle;

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("Z^2").unwrap().generators().len(), 4);
        assert_eq!(parse_group("F(2)").unwrap().generators().len(), 4);
        let p = parse_group("Z^2 x C(2)").unwrap();
        assert_eq!(p.generators().len(), 6);
        assert_eq!(p.spec(), "Z^2 x C(2)");
        for spec in ["Z^1", "S(3)", "F(2) x S(3) x Z^3", "C(5)"] {
            assert_eq!(parse_group(spec).unwrap().spec(), spec);
        }
    }

    #[test]
    fn group_spec_errors() {
        match parse_group("Z^2 x F(").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 8),
            e => panic!("{e}"),
        }
        match parse_group("Z^").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 2),
            e => panic!("{e}"),
        }
        assert!(matches!(
            parse_group("Q(3)"),
            Err(Error::UnsupportedAtom(_))
        ));
        assert!(matches!(
            parse_group("Z^2 x "),
            Err(Error::Parse { pos: 6, .. })
        ));
        assert!(matches!(parse_group("Zx"), Err(Error::Parse { .. })));
    }

    #[test]
    fn cocycle_document_round_trip() {
        let ex = Arc::new(CayleyExplorer::new(parse_group("Z^2").unwrap()).unwrap());
        let h = parse_group("S(3)").unwrap();
        let s = h.parse_label("(1 2)").unwrap();
        let c = make_hom_cocycle(ex, h, Alphabet::binary(), &[s.clone(), s]).unwrap();
        let doc = CocycleDocument::from_cocycle(&c).unwrap();
        let json = doc.to_json().unwrap();
        let back = CocycleDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_cocycle().unwrap().rules(), c.rules());
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn version_gate() {
        let json = r#"{"version": 2, "group": "Z^1", "target": "Z^1",
            "alphabet": {"symbols": ["0"], "zero": "0"}, "window": 0, "rules": {}}"#;
        assert!(matches!(
            CocycleDocument::from_json(json),
            Err(Error::Version {
                found: 2,
                expected: 1
            })
        ));
    }
}
