//! Instance serialization and report generation.
//!
//! The text format is line-oriented with section headers, chosen for
//! hand-editability of small instances:
//!
//! ```text
//! # comment
//! GROUPOID
//! elements 4
//! units 0 1
//! arrow 2 0 1 3        # id range source inverse
//! arrow 3 1 0 2
//! compose 2 3 0        # g h gh, one line per composable pair
//! GROUPOID              # alternative: a single-unit abelian group
//! grid 2 2
//! COCYCLE
//! modulus 2
//! entry 3 3 1          # c(g,h) = exponent
//! bilinear 0 0 1 0     # alternative on grids: row-major coefficients
//! SUBGROUPOID s
//! members 0 1
//! ROTATION
//! theta 1/4
//! lattice 2 0 ; 4 0    # matrix rows (generators are the columns);
//!                      # a single row is a single generator vector
//! ```
//!
//! Reports serialize to a stable JSON schema; roots of unity are always
//! emitted as "exponent/modulus" strings, never as floats.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cocycle::{Cocycle, CocycleKind, TwistedGroupoid};
use crate::error::RotationError;
use crate::gpd::{validate_groupoid, ComposeRule, Groupoid, RawGroupoid, Subgroupoid};
use crate::rotation::{hermite_form, LatticeSubgroup, RotationWeyl, Theta};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// The rotation block of an instance: θ and the subgroup of ℤ².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSpec {
    pub theta: Theta,
    /// generator matrix rows as given
    pub rows: Vec<[i64; 2]>,
    pub lattice: LatticeSubgroup,
}

/// A parsed instance: a finite twisted groupoid with named subgroupoids,
/// and/or a rotation block.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub twisted: Option<TwistedGroupoid>,
    pub subgroupoids: Vec<(String, Subgroupoid)>,
    pub rotation: Option<RotationSpec>,
}

impl Instance {
    pub fn subgroupoid(&self, name: Option<&str>) -> Result<&(String, Subgroupoid), String> {
        match name {
            Some(n) => self
                .subgroupoids
                .iter()
                .find(|(s, _)| s == n)
                .ok_or_else(|| format!("no subgroupoid named {n:?}")),
            None => match self.subgroupoids.len() {
                0 => Err("the instance declares no subgroupoid".into()),
                1 => Ok(&self.subgroupoids[0]),
                _ => Err("several subgroupoids declared; pick one with --subgroupoid".into()),
            },
        }
    }
}

/// Parses the generator matrix syntax "a b" or "a b ; c d" (rows).
pub fn parse_lattice_rows(text: &str) -> Result<Vec<[i64; 2]>, RotationError> {
    let mut rows = Vec::new();
    for row in text.split(';') {
        let nums: Result<Vec<i64>, _> = row.split_whitespace().map(str::parse).collect();
        let nums =
            nums.map_err(|_| RotationError::Unsupported(format!("bad lattice row {row:?}")))?;
        if nums.len() != 2 {
            return Err(RotationError::Unsupported(
                "lattice rows must have two entries".into(),
            ));
        }
        rows.push([nums[0], nums[1]]);
    }
    if rows.is_empty() || rows.len() > 2 {
        return Err(RotationError::Unsupported(
            "the lattice needs one or two generator rows".into(),
        ));
    }
    Ok(rows)
}

/// Columns of the generator matrix from its rows; a single row is a single
/// generator vector.
pub fn lattice_from_rows(rows: &[[i64; 2]]) -> LatticeSubgroup {
    match rows {
        [v] => hermite_form([[v[0], v[1]], [0, 0]]),
        [r0, r1] => hermite_form([[r0[0], r1[0]], [r0[1], r1[1]]]),
        _ => unreachable!("parse_lattice_rows bounds the row count"),
    }
}

struct GroupoidDraft {
    elements: Option<usize>,
    units: Vec<usize>,
    grid: Option<Vec<u64>>,
    arrows: BTreeMap<usize, (usize, usize, usize)>,
    compose: Vec<(usize, usize, usize)>,
    line: usize,
}

struct CocycleDraft {
    modulus: Option<u64>,
    entries: Vec<((usize, usize), u64)>,
    bilinear: Option<Vec<u64>>,
    line: usize,
}

/// Parses instance text into validated objects; diagnostics carry the
/// 1-based line number of the offending entry.
pub fn parse_instance(name: &str, text: &str) -> Result<Instance, ParseError> {
    enum Section {
        None,
        Groupoid,
        Cocycle,
        Subgroupoid(usize),
        Rotation,
    }
    let mut section = Section::None;
    let mut gpd_draft: Option<GroupoidDraft> = None;
    let mut coc_draft: Option<CocycleDraft> = None;
    let mut subs: Vec<(String, Vec<usize>, usize)> = Vec::new();
    let mut theta: Option<(Theta, usize)> = None;
    let mut lattice_rows: Option<(Vec<[i64; 2]>, usize)> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let lno = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let parse_ints = |rest: &[&str]| -> Result<Vec<usize>, ParseError> {
            rest.iter()
                .map(|w| {
                    w.parse::<usize>().map_err(|_| ParseError {
                        line: lno,
                        message: format!("expected an integer, found {w:?}"),
                    })
                })
                .collect()
        };
        match head {
            "GROUPOID" => {
                if gpd_draft.is_some() {
                    return err(lno, "only one GROUPOID section is allowed");
                }
                gpd_draft = Some(GroupoidDraft {
                    elements: None,
                    units: Vec::new(),
                    grid: None,
                    arrows: BTreeMap::new(),
                    compose: Vec::new(),
                    line: lno,
                });
                section = Section::Groupoid;
            }
            "COCYCLE" => {
                if coc_draft.is_some() {
                    return err(lno, "only one COCYCLE section is allowed");
                }
                coc_draft = Some(CocycleDraft {
                    modulus: None,
                    entries: Vec::new(),
                    bilinear: None,
                    line: lno,
                });
                section = Section::Cocycle;
            }
            "SUBGROUPOID" => {
                let name = rest.first().copied().unwrap_or("s").to_string();
                if subs.iter().any(|(n, _, _)| *n == name) {
                    return err(lno, format!("duplicate subgroupoid name {name:?}"));
                }
                subs.push((name, Vec::new(), lno));
                section = Section::Subgroupoid(subs.len() - 1);
            }
            "ROTATION" => section = Section::Rotation,
            _ => match section {
                Section::None => return err(lno, format!("unexpected directive {head:?}")),
                Section::Groupoid => {
                    let draft = gpd_draft.as_mut().unwrap();
                    match head {
                        "elements" => {
                            draft.elements =
                                Some(*parse_ints(&rest)?.first().ok_or(ParseError {
                                    line: lno,
                                    message: "elements needs a count".into(),
                                })?);
                        }
                        "units" => draft.units.extend(parse_ints(&rest)?),
                        "grid" => {
                            draft.grid =
                                Some(parse_ints(&rest)?.iter().map(|&d| d as u64).collect())
                        }
                        "arrow" => {
                            let v = parse_ints(&rest)?;
                            if v.len() != 4 {
                                return err(lno, "arrow needs: id range source inverse");
                            }
                            if draft.arrows.insert(v[0], (v[1], v[2], v[3])).is_some() {
                                return err(lno, format!("duplicate arrow id {}", v[0]));
                            }
                        }
                        "compose" => {
                            let v = parse_ints(&rest)?;
                            if v.len() != 3 {
                                return err(lno, "compose needs: g h gh");
                            }
                            draft.compose.push((v[0], v[1], v[2]));
                        }
                        _ => return err(lno, format!("unknown GROUPOID directive {head:?}")),
                    }
                }
                Section::Cocycle => {
                    let draft = coc_draft.as_mut().unwrap();
                    match head {
                        "modulus" => {
                            draft.modulus =
                                Some(*parse_ints(&rest)?.first().ok_or(ParseError {
                                    line: lno,
                                    message: "modulus needs a value".into(),
                                })? as u64)
                        }
                        "entry" => {
                            let v = parse_ints(&rest)?;
                            if v.len() != 3 {
                                return err(lno, "entry needs: g h exponent");
                            }
                            draft.entries.push(((v[0], v[1]), v[2] as u64));
                        }
                        "bilinear" => {
                            draft.bilinear =
                                Some(parse_ints(&rest)?.iter().map(|&x| x as u64).collect())
                        }
                        _ => return err(lno, format!("unknown COCYCLE directive {head:?}")),
                    }
                }
                Section::Subgroupoid(i) => match head {
                    "members" => subs[i].1.extend(parse_ints(&rest)?),
                    _ => return err(lno, format!("unknown SUBGROUPOID directive {head:?}")),
                },
                Section::Rotation => match head {
                    "theta" => {
                        let t = rest.join(" ");
                        theta = Some((
                            Theta::parse(&t).map_err(|e| ParseError {
                                line: lno,
                                message: e.to_string(),
                            })?,
                            lno,
                        ));
                    }
                    "lattice" => {
                        let t = rest.join(" ");
                        lattice_rows = Some((
                            parse_lattice_rows(&t).map_err(|e| ParseError {
                                line: lno,
                                message: e.to_string(),
                            })?,
                            lno,
                        ));
                    }
                    _ => return err(lno, format!("unknown ROTATION directive {head:?}")),
                },
            },
        }
    }

    // Assemble and validate the groupoid.
    let mut perm: Vec<usize> = Vec::new();
    let twisted = match gpd_draft {
        None => {
            if coc_draft.is_some() || !subs.is_empty() {
                return err(
                    coc_draft.map(|c| c.line).unwrap_or(1),
                    "COCYCLE and SUBGROUPOID sections need a GROUPOID",
                );
            }
            None
        }
        Some(draft) => {
            let gpd = if let Some(dims) = &draft.grid {
                if dims.is_empty() || dims.contains(&0) {
                    return err(draft.line, "grid dimensions must be positive");
                }
                let g = Groupoid::abelian_grid(dims);
                perm = (0..g.n_elements()).collect();
                g
            } else {
                let Some(n) = draft.elements else {
                    return err(draft.line, "GROUPOID needs an elements count or a grid");
                };
                if n == 0 {
                    return err(draft.line, "a groupoid needs at least one element");
                }
                let mut range = vec![usize::MAX; n];
                let mut source = vec![usize::MAX; n];
                let mut inverse = vec![usize::MAX; n];
                for (&id, &(r, s, inv)) in &draft.arrows {
                    if id >= n {
                        return err(draft.line, format!("arrow id {id} out of range"));
                    }
                    range[id] = r;
                    source[id] = s;
                    inverse[id] = inv;
                }
                for &u in &draft.units {
                    if u >= n {
                        return err(draft.line, format!("unit id {u} out of range"));
                    }
                    // units may omit their arrow line
                    if range[u] == usize::MAX {
                        range[u] = u;
                        source[u] = u;
                        inverse[u] = u;
                    }
                }
                if let Some(missing) = range.iter().position(|&r| r == usize::MAX) {
                    return err(draft.line, format!("element {missing} has no arrow line"));
                }
                let raw = RawGroupoid {
                    n,
                    unit_ids: draft.units.clone(),
                    range,
                    source,
                    inverse,
                    compose: draft.compose.clone(),
                };
                let (g, p) = validate_groupoid(&raw).map_err(|e| ParseError {
                    line: draft.line,
                    message: e.to_string(),
                })?;
                perm = p;
                g
            };
            let cocycle = match coc_draft {
                None => Cocycle::trivial(),
                Some(c) => {
                    let modulus = c.modulus.unwrap_or(1);
                    if modulus == 0 {
                        return err(c.line, "cocycle modulus must be at least 1");
                    }
                    if let Some(b) = c.bilinear {
                        let r = match gpd.rule() {
                            ComposeRule::Grid(d) => d.len(),
                            _ => return err(c.line, "bilinear cocycles need a grid groupoid"),
                        };
                        if b.len() != r * r {
                            return err(c.line, format!("bilinear needs {} coefficients", r * r));
                        }
                        let coeffs: Vec<Vec<u64>> = b.chunks(r).map(|row| row.to_vec()).collect();
                        Cocycle::bilinear_grid(&gpd, modulus, coeffs).map_err(|e| ParseError {
                            line: c.line,
                            message: e.to_string(),
                        })?
                    } else {
                        let entries = c
                            .entries
                            .iter()
                            .map(|&((g1, g2), e)| {
                                if g1 >= gpd.n_elements() || g2 >= gpd.n_elements() {
                                    return err(c.line, "cocycle entry id out of range");
                                }
                                Ok(((perm[g1], perm[g2]), e))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Cocycle::from_table(&gpd, modulus, entries).map_err(|e| ParseError {
                            line: c.line,
                            message: e.to_string(),
                        })?
                    }
                }
            };
            Some(TwistedGroupoid::new(gpd, cocycle))
        }
    };

    let mut subgroupoids = Vec::new();
    for (name, members, lno) in subs {
        let tw = twisted.as_ref().unwrap();
        let mapped: Result<Vec<usize>, ParseError> = members
            .iter()
            .map(|&m| {
                if m >= tw.gpd.n_elements() {
                    err(lno, format!("subgroupoid member {m} out of range"))
                } else {
                    Ok(perm[m])
                }
            })
            .collect();
        let sub = Subgroupoid::new(&tw.gpd, mapped?).map_err(|e| ParseError {
            line: lno,
            message: format!("subgroupoid {name:?}: {e}"),
        })?;
        subgroupoids.push((name, sub));
    }

    let rotation = match (theta, lattice_rows) {
        (None, None) => None,
        (Some((theta, _)), Some((rows, _))) => Some(RotationSpec {
            theta,
            lattice: lattice_from_rows(&rows),
            rows,
        }),
        (Some((_, l)), None) => return err(l, "ROTATION needs a lattice line"),
        (None, Some((_, l))) => return err(l, "ROTATION needs a theta line"),
    };

    if twisted.is_none() && rotation.is_none() {
        return err(1, "the instance is empty");
    }
    Ok(Instance {
        name: name.to_string(),
        twisted,
        subgroupoids,
        rotation,
    })
}

/// Emits an instance in the text format; parse(emit(x)) is structurally
/// equal to x (instances are stored normalized, with units first).
pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    if let Some(tw) = &inst.twisted {
        out.push_str("GROUPOID\n");
        match tw.gpd.rule() {
            ComposeRule::Grid(dims) => {
                let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                out.push_str(&format!("grid {}\n", dims.join(" ")));
            }
            ComposeRule::Table(table) => {
                out.push_str(&format!("elements {}\n", tw.gpd.n_elements()));
                let units: Vec<String> = tw.gpd.unit_ids().map(|u| u.to_string()).collect();
                out.push_str(&format!("units {}\n", units.join(" ")));
                for e in tw.gpd.elements() {
                    out.push_str(&format!(
                        "arrow {e} {} {} {}\n",
                        tw.gpd.range(e),
                        tw.gpd.source(e),
                        tw.gpd.inverse(e)
                    ));
                }
                for (&(g, h), &gh) in table {
                    out.push_str(&format!("compose {g} {h} {gh}\n"));
                }
            }
        }
        match tw.cocycle.kind() {
            CocycleKind::Trivial => {}
            CocycleKind::Table(entries) => {
                out.push_str("COCYCLE\n");
                out.push_str(&format!("modulus {}\n", tw.cocycle.modulus()));
                for (&(g, h), &e) in entries {
                    out.push_str(&format!("entry {g} {h} {e}\n"));
                }
            }
            CocycleKind::GridBilinear(b) => {
                out.push_str("COCYCLE\n");
                out.push_str(&format!("modulus {}\n", tw.cocycle.modulus()));
                let flat: Vec<String> = b
                    .iter()
                    .flat_map(|row| row.iter().map(|x| x.to_string()))
                    .collect();
                out.push_str(&format!("bilinear {}\n", flat.join(" ")));
            }
        }
        for (name, sub) in &inst.subgroupoids {
            out.push_str(&format!("SUBGROUPOID {name}\n"));
            let members: Vec<String> = sub.members().iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("members {}\n", members.join(" ")));
        }
    }
    if let Some(rot) = &inst.rotation {
        out.push_str("ROTATION\n");
        out.push_str(&format!("theta {}\n", rot.theta));
        let rows: Vec<String> = rot
            .rows
            .iter()
            .map(|r| format!("{} {}", r[0], r[1]))
            .collect();
        out.push_str(&format!("lattice {}\n", rows.join(" ; ")));
    }
    out
}

/// The stable machine-readable verdict schema.
#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroupoid: Option<String>,
    pub checks: ChecksJson,
    pub weyl: WeylJson,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChecksJson {
    pub max: bool,
    pub ricc: bool,
    pub cartan: bool,
    #[serde(rename = "diag_S")]
    pub diag_s: bool,
    #[serde(rename = "diag_B")]
    pub diag_b: bool,
}

/// Weyl-side facts; `trivializable` is true/false when decided and the
/// string "unknown" where the theory leaves the question open.
#[derive(Debug, Clone, Serialize)]
pub struct WeylJson {
    pub principal: Option<bool>,
    pub free: Option<bool>,
    pub trivializable: serde_json::Value,
}

impl fmt::Display for ReportJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance     {}", self.instance)?;
        if let Some(s) = &self.subgroupoid {
            writeln!(f, "subgroupoid  {s}")?;
        }
        writeln!(
            f,
            "checks       max={} ricc={} cartan={} diag_S={} diag_B={}",
            self.checks.max,
            self.checks.ricc,
            self.checks.cartan,
            self.checks.diag_s,
            self.checks.diag_b
        )?;
        let opt = |v: Option<bool>| match v {
            Some(true) => "true",
            Some(false) => "false",
            None => "-",
        };
        writeln!(
            f,
            "weyl         principal={} free={} trivializable={}",
            opt(self.weyl.principal),
            opt(self.weyl.free),
            self.weyl.trivializable
        )?;
        for note in &self.notes {
            writeln!(f, "note         {note}")?;
        }
        Ok(())
    }
}

/// Full check reports for an instance: finite pairs and/or rotation block.
pub fn instance_reports(
    inst: &Instance,
    subgroupoid: Option<&str>,
) -> Result<Vec<ReportJson>, String> {
    let mut out = Vec::new();
    if let Some(tw) = &inst.twisted {
        let pairs: Vec<&(String, Subgroupoid)> = match subgroupoid {
            Some(_) => vec![inst.subgroupoid(subgroupoid)?],
            None => inst.subgroupoids.iter().collect(),
        };
        if pairs.is_empty() {
            return Err(format!("{}: no subgroupoid to check", inst.name));
        }
        for (sname, sub) in pairs {
            out.push(finite_report(&inst.name, tw, sname, sub)?);
        }
    }
    if let Some(rot) = &inst.rotation {
        out.push(rotation_report(rot));
    }
    Ok(out)
}

pub fn finite_report(
    name: &str,
    tw: &TwistedGroupoid,
    sname: &str,
    sub: &Subgroupoid,
) -> Result<ReportJson, String> {
    let verdict = crate::diag::check_cartan(tw, sub);
    let diag_s = crate::diag::check_diag_s(tw, sub);
    let diag_b = crate::diag::check_diag_b(tw, sub);
    let mut notes = Vec::new();
    let (principal, free, trivializable) = if verdict.wide && verdict.normal && verdict.abelian {
        let w = crate::weyl::build_weyl_groupoid(tw, sub).map_err(|e| e.to_string())?;
        let trivializable = if verdict.cartan {
            match crate::weyl::weyl_twist_trivializable(tw, sub).map_err(|e| e.to_string())? {
                Some(_) => serde_json::Value::Bool(true),
                None => serde_json::Value::Bool(false),
            }
        } else {
            notes.push("weyl twist only constructed over Cartan instances".into());
            serde_json::Value::Null
        };
        (Some(w.is_principal()), Some(w.is_free()), trivializable)
    } else {
        notes.push("weyl groupoid needs a wide normal subgroupoid with abelian twist".into());
        (None, None, serde_json::Value::Null)
    };
    Ok(ReportJson {
        instance: name.into(),
        subgroupoid: Some(sname.into()),
        checks: ChecksJson {
            max: verdict.max,
            ricc: verdict.ricc,
            cartan: verdict.cartan,
            diag_s,
            diag_b,
        },
        weyl: WeylJson {
            principal,
            free,
            trivializable,
        },
        notes,
    })
}

pub fn rotation_report(rot: &RotationSpec) -> ReportJson {
    let theta = &rot.theta;
    let s = &rot.lattice;
    let cartan = crate::rotation::check_cartan_rotation(theta, s);
    let mut notes = vec![format!("rotation instance: theta {theta}, lattice {s:?}")];
    notes.push(
        "for rotation instances (max) and (ricc) are decided jointly by the lattice criterion"
            .into(),
    );
    let diag = if cartan {
        crate::rotation::check_diag_rotation(theta, s).unwrap_or(false)
    } else {
        false
    };
    if cartan {
        match crate::rotation::weyl_groupoid_rotation(theta, s) {
            Ok(RotationWeyl::IrrationalCircle { iso_coeffs }) => notes.push(format!(
                "weyl groupoid: circle rotation by theta with quotient iso g -> {}*g1 + {}*g2",
                iso_coeffs.0, iso_coeffs.1
            )),
            Ok(RotationWeyl::RationalProduct {
                k_prime, n_prime, ..
            }) => notes.push(format!(
                "weyl groupoid: (T x_(p/{k_prime}) Z/{k_prime}) x (T x_(p/{n_prime}) Z/{n_prime})"
            )),
            Err(e) => notes.push(format!("weyl descriptor unavailable: {e}")),
        }
    }
    let trivializable = if !cartan {
        serde_json::Value::Null
    } else {
        match theta {
            Theta::Irrational => match crate::rotation::trivializing_f_rotation(theta, s) {
                Ok(f) if f.restriction_identity && f.homomorphism_identity => {
                    notes.push(format!(
                        "trivializing F: a={}, b={}, half-exponent quad coefficients {:?}",
                        f.a, f.b, f.quad
                    ));
                    serde_json::Value::Bool(true)
                }
                _ => serde_json::Value::Bool(false),
            },
            Theta::Rational { .. } => {
                notes.push(
                    "trivializability of the Weyl twist for rational theta is an open question"
                        .into(),
                );
                serde_json::Value::String("unknown".into())
            }
        }
    };
    ReportJson {
        instance: format!("rotation:{theta}"),
        subgroupoid: None,
        checks: ChecksJson {
            max: cartan,
            ricc: cartan,
            cartan,
            diag_s: diag,
            diag_b: diag,
        },
        weyl: WeylJson {
            principal: cartan.then_some(diag),
            free: cartan.then_some(diag),
            trivializable,
        },
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const HEISENBERG: &str = "\
# the Klein four-group with the anticommutation cocycle
GROUPOID
grid 2 2
COCYCLE
modulus 2
bilinear 0 0 1 0
SUBGROUPOID s
members 0 1
";

    #[test]
    fn heisenberg_fixture_parses_and_round_trips() {
        let inst = parse_instance("heisenberg", HEISENBERG).unwrap();
        let tw = inst.twisted.as_ref().unwrap();
        assert_eq!(tw.gpd.n_elements(), 4);
        assert_eq!(tw.cocycle.modulus(), 2);
        assert_eq!(inst.subgroupoids.len(), 1);
        assert!(crate::diag::check_diag_s(tw, &inst.subgroupoids[0].1));
        let text = emit_instance(&inst);
        let again = parse_instance("heisenberg", &text).unwrap();
        assert_eq!(tw.gpd, again.twisted.as_ref().unwrap().gpd);
        assert_eq!(tw.cocycle, again.twisted.as_ref().unwrap().cocycle);
        assert_eq!(inst.subgroupoids, again.subgroupoids);
    }

    #[test]
    fn empty_instance_is_rejected() {
        let e = parse_instance("empty", "# nothing here\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_instance("empty", "GROUPOID\nelements 0\n").unwrap_err();
        assert!(e.message.contains("at least one"));
    }

    #[test]
    fn table_groupoid_round_trip() {
        // S₃ with a table cocycle, exercised through emit → parse
        let g = catalog::symmetric_3();
        let c = catalog::bicharacter_cocycle(&g, 2, |_, _| 1).unwrap();
        let tw = TwistedGroupoid::new(g, c);
        let iso = crate::gpd::isotropy(&tw.gpd);
        let inst = Instance {
            name: "s3".into(),
            twisted: Some(tw),
            subgroupoids: vec![("iso".into(), iso)],
            rotation: None,
        };
        let text = emit_instance(&inst);
        let again = parse_instance("s3", &text).unwrap();
        let tw0 = inst.twisted.as_ref().unwrap();
        let tw1 = again.twisted.as_ref().unwrap();
        assert_eq!(tw0.gpd, tw1.gpd);
        assert_eq!(tw0.cocycle, tw1.cocycle);
        assert_eq!(inst.subgroupoids, again.subgroupoids);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "GROUPOID\nelements 2\nunits 0\narrow 1 0 0 9\n";
        let e = parse_instance("bad", bad).unwrap_err();
        assert_eq!(e.line, 1); // groupoid assembled at its header line
        let bad = "GROUPOID\ngrid 2\nCOCYCLE\nmodulus 2\nentry 5 0 1\n";
        let e = parse_instance("bad", bad).unwrap_err();
        assert_eq!(e.line, 3);
        let bad = "FOO\n";
        assert_eq!(parse_instance("bad", bad).unwrap_err().line, 1);
    }

    #[test]
    fn rotation_block_parses() {
        let text = "ROTATION\ntheta irrational\nlattice 2 3\n";
        let inst = parse_instance("rot", text).unwrap();
        let rot = inst.rotation.unwrap();
        assert_eq!(rot.theta, Theta::Irrational);
        assert_eq!((rot.lattice.m, rot.lattice.n), (2, 3));
        // matrix form: rows "2 0; 4 0" span ℤ(2,4)
        let text = "ROTATION\ntheta 1/4\nlattice 2 0 ; 4 0\n";
        let rot = parse_instance("rot", text).unwrap().rotation.unwrap();
        assert_eq!(rot.lattice.rank, 1);
        assert_eq!((rot.lattice.m, rot.lattice.n), (2, 4));
    }

    #[test]
    fn json_schema_is_stable() {
        let report = ReportJson {
            instance: "x".into(),
            subgroupoid: Some("s".into()),
            checks: ChecksJson {
                max: true,
                ricc: true,
                cartan: true,
                diag_s: true,
                diag_b: true,
            },
            weyl: WeylJson {
                principal: Some(true),
                free: Some(true),
                trivializable: serde_json::Value::String("unknown".into()),
            },
            notes: vec![],
        };
        let json = serde_json::to_string(&report).unwrap();
        let expected = r#"{"instance":"x","subgroupoid":"s","checks":{"max":true,"ricc":true,"cartan":true,"diag_S":true,"diag_B":true},"weyl":{"principal":true,"free":true,"trivializable":"unknown"},"notes":[]}"#;
        assert_eq!(json, expected);
    }
}
