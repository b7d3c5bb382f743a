//! Command-line surface: validation, checks, Weyl constructions and the
//! rotation engine, with human-readable and JSON reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use cartan_weyl::catalog;
use cartan_weyl::diag;
use cartan_weyl::dual;
use cartan_weyl::gpd;
use cartan_weyl::io::{
    emit_instance, instance_reports, lattice_from_rows, parse_instance, parse_lattice_rows,
    rotation_report, Instance, ReportJson, RotationSpec,
};
use cartan_weyl::rotation::{self, Theta};
use cartan_weyl::weyl;
use cartan_weyl::Subgroupoid;
use cartan_weyl::TwistedGroupoid;

#[derive(Parser)]
#[command(
    name = "cartan-weyl",
    about = "Exact Cartan/C*-diagonal decisions and Weyl constructions for finite twisted groupoids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text reports.
    #[arg(long, global = true)]
    json: bool,
    /// Abort when adaptive phase moduli exceed this bound.
    #[arg(long, global = true)]
    modulus_limit: Option<u64>,
    /// Run brute-force cross-checks alongside the main algorithms.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Validate { file: PathBuf },
    /// Structural summary of an instance.
    Info { file: PathBuf },
    /// Decide the Cartan conditions (wide, normal, abelian, max, ricc).
    CheckCartan {
        file: Option<PathBuf>,
        /// Subgroupoid name when the instance declares several.
        #[arg(long)]
        subgroupoid: Option<String>,
        /// Batch over every .gpd file in a directory.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Decide the C*-diagonal conditions.
    CheckDiagonal {
        file: Option<PathBuf>,
        #[arg(long)]
        subgroupoid: Option<String>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Build the Weyl groupoid (and optionally the Weyl twist).
    Weyl {
        file: PathBuf,
        #[arg(long)]
        subgroupoid: Option<String>,
        /// Also build the reduced Weyl twist and emit it as an instance.
        #[arg(long)]
        twist: bool,
    },
    /// Decide trivializability of the Weyl twist.
    WeylTrivial {
        file: Option<PathBuf>,
        #[arg(long)]
        subgroupoid: Option<String>,
        /// Rotation route: theta as p/q or "irrational".
        #[arg(long)]
        theta: Option<String>,
        /// Rotation route: generator matrix rows (generators are the columns),
        /// e.g. "2 0 ; 0 3"; a single row "0 1" is one generator vector.
        #[arg(long = "S")]
        s: Option<String>,
    },
    /// Enumerate the twisted Pontryagin dual fibers.
    Dual {
        file: PathBuf,
        #[arg(long)]
        subgroupoid: Option<String>,
    },
    /// The symbolic rotation-algebra engine on (ℤ², c_θ).
    Rotation {
        #[arg(long)]
        theta: String,
        #[arg(long = "S")]
        s: String,
    },
    /// Run the theorem-level equivalence suite.
    EquivalenceSuite {
        file: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Use the built-in instance catalog.
        #[arg(long)]
        builtin: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(failed_checks) => {
            if failed_checks {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let mut inst =
        parse_instance(&name, &text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    if let (Some(limit), Some(tw)) = (cli.modulus_limit, inst.twisted.as_mut()) {
        tw.modulus_limit = limit;
    }
    Ok(inst)
}

fn catalog_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "gpd").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(anyhow!("no .gpd files in {}", dir.display()));
    }
    Ok(files)
}

/// Ok(true) means "a gated check failed" (exit code 1).
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Validate { file } => {
            let inst = load(cli, file)?;
            if let Some(tw) = &inst.twisted {
                println!(
                    "valid: {} elements, {} units, cocycle modulus {}, {} subgroupoid(s)",
                    tw.gpd.n_elements(),
                    tw.gpd.n_units(),
                    tw.cocycle.modulus(),
                    inst.subgroupoids.len()
                );
            }
            if let Some(rot) = &inst.rotation {
                println!(
                    "valid rotation block: theta {}, {:?}",
                    rot.theta, rot.lattice
                );
            }
            Ok(false)
        }
        Command::Info { file } => {
            let inst = load(cli, file)?;
            info(&inst);
            Ok(false)
        }
        Command::CheckCartan {
            file,
            subgroupoid,
            catalog,
        } => batch_check(cli, file, subgroupoid, catalog, |r| r.checks.cartan),
        Command::CheckDiagonal {
            file,
            subgroupoid,
            catalog,
        } => batch_check(cli, file, subgroupoid, catalog, |r| r.checks.diag_s),
        Command::Weyl {
            file,
            subgroupoid,
            twist,
        } => {
            let inst = load(cli, file)?;
            let tw = instance_twisted(&inst)?;
            let (sname, sub) = inst
                .subgroupoid(subgroupoid.as_deref())
                .map_err(|e| anyhow!(e))?;
            let w = weyl::build_weyl_groupoid(tw, sub)?;
            let iso = w.isotropy_points().len();
            println!(
                "weyl groupoid over {}/{}: {} dual points, {} quotient arrows, {} arrows, \
                 {} isotropy arrows, principal={}, free={}",
                inst.name,
                sname,
                w.space.len(),
                w.acting.n_elements(),
                w.arrows().len(),
                iso,
                w.is_principal(),
                w.is_free()
            );
            if *twist {
                let wt = weyl::build_weyl_twist(tw, sub)?;
                println!(
                    "weyl twist: phase modulus {}, {} base arrows",
                    wt.modulus,
                    wt.arrows.len(),
                );
                let exported = Instance {
                    name: format!("{}-weyl-twist", inst.name),
                    twisted: Some(wt.as_instance()),
                    subgroupoids: vec![],
                    rotation: None,
                };
                print!("{}", emit_instance(&exported));
            }
            Ok(false)
        }
        Command::WeylTrivial {
            file,
            subgroupoid,
            theta,
            s,
        } => match (file, theta) {
            (Some(file), None) => {
                let inst = load(cli, file)?;
                let tw = instance_twisted(&inst)?;
                let (_, sub) = inst
                    .subgroupoid(subgroupoid.as_deref())
                    .map_err(|e| anyhow!(e))?;
                let witness = weyl::weyl_twist_trivializable(tw, sub)?;
                match witness {
                    Some(f) => {
                        let w = weyl::build_weyl_groupoid(tw, sub)?;
                        let ok = weyl::verify_trivialization(tw, sub, &w, &f)?;
                        println!("trivializable=true (witness verified: {ok})");
                        for (&(c, x), v) in &f.values {
                            println!("  F(section of coset {c}, character {x}) = {v}");
                        }
                        if cli.oracle {
                            let wt = weyl::build_weyl_twist(tw, sub)?;
                            let found =
                                weyl::trivialization_search_oracle(&wt, 2 * wt.modulus);
                            println!("oracle search agrees: {}", found.is_some());
                        }
                        Ok(!ok)
                    }
                    None => {
                        println!("trivializable=false");
                        Ok(true)
                    }
                }
            }
            (None, Some(theta)) => {
                let theta = Theta::parse(theta)?;
                let rows = parse_lattice_rows(s.as_deref().unwrap_or_default())?;
                let lattice = lattice_from_rows(&rows);
                match rotation::trivializing_f_rotation(&theta, &lattice) {
                    Ok(f) => {
                        println!(
                            "trivializable=true  F(z; h; kappa_w) = z \
                             * e^(pi*i*theta*({}*h1^2 + {}*h1*h2 + {}*h2^2)) * w^({}*h1 + {}*h2)",
                            f.quad.0, f.quad.1, f.quad.2, f.linear.0, f.linear.1
                        );
                        println!(
                            "bezout: a={}, b={}; identities verified: restriction={}, \
                             homomorphism={}",
                            f.a, f.b, f.restriction_identity, f.homomorphism_identity
                        );
                        Ok(!(f.restriction_identity && f.homomorphism_identity))
                    }
                    Err(cartan_weyl::error::RotationError::Unsupported(m)) => {
                        println!("trivializable=unknown ({m})");
                        Ok(false)
                    }
                    Err(e) => Err(e.into()),
                }
            }
            _ => Err(anyhow!(
                "weyl-trivial needs either an instance file or --theta with --S"
            )),
        },
        Command::Dual { file, subgroupoid } => {
            let inst = load(cli, file)?;
            let tw = instance_twisted(&inst)?;
            let (sname, sub) = inst
                .subgroupoid(subgroupoid.as_deref())
                .map_err(|e| anyhow!(e))?;
            for u in tw.gpd.unit_ids() {
                let fiber = dual::enumerate_dual_fiber(tw, sub, u)?;
                println!("unit {u}: {} characters", fiber.characters.len());
                for (i, kappa) in fiber.characters.iter().enumerate() {
                    let vals: Vec<String> = kappa
                        .values
                        .iter()
                        .map(|(s, v)| format!("{s}:{v}"))
                        .collect();
                    println!("  kappa[{i}] {}", vals.join(" "));
                }
                if cli.oracle {
                    if fiber.characters.len() <= 16 {
                        let brute = dual::enumerate_dual_fiber_bruteforce(tw, sub, u)?;
                        let same = brute.characters == fiber.characters;
                        println!("  oracle agrees: {same}");
                        if !same {
                            return Err(anyhow!(
                                "brute-force dual enumeration disagrees at unit {u} of {}/{}",
                                inst.name,
                                sname
                            ));
                        }
                    } else {
                        println!("  oracle skipped: fiber too large");
                    }
                }
            }
            Ok(false)
        }
        Command::Rotation { theta, s } => {
            let theta = Theta::parse(theta)?;
            let rows = parse_lattice_rows(s)?;
            let spec = RotationSpec {
                theta,
                lattice: lattice_from_rows(&rows),
                rows,
            };
            let report = rotation_report(&spec);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(!report.checks.cartan)
        }
        Command::EquivalenceSuite {
            file,
            catalog: catalog_dir,
            builtin,
        } => {
            let mut failed = false;
            let mut run_pair = |name: &str,
                                tw: &TwistedGroupoid,
                                sname: &str,
                                sub: &Subgroupoid|
             -> Result<()> {
                let report = diag::equivalence_suite(tw, sub)?;
                let mut ok = report.consistent;
                let mut extra = String::new();
                if cli.oracle {
                    let rep = gpd::is_wide_normal(&tw.gpd, sub);
                    if rep.wide && rep.normal && tw.is_abelian_twist(sub) {
                        let delta = weyl::cross_check_delta(tw, sub)?;
                        ok &= delta;
                        extra = format!(" delta-cross-check={delta}");
                    }
                }
                println!(
                    "{}: {name}/{sname} cartan={} diag_S={} diag_B={}{extra}{}",
                    if ok { "ok  " } else { "FAIL" },
                    report.cartan.cartan,
                    report.diag_s,
                    report.diag_b,
                    if report.failures.is_empty() {
                        String::new()
                    } else {
                        format!(" [{}]", report.failures.join("; "))
                    }
                );
                failed |= !ok;
                Ok(())
            };
            if *builtin {
                for inst in catalog::builtin_catalog() {
                    for (i, sub) in catalog::abelian_twist_subgroupoids(&inst.twisted)
                        .iter()
                        .enumerate()
                    {
                        run_pair(&inst.name, &inst.twisted, &format!("S{i}"), sub)?;
                    }
                }
            } else {
                let files = match (file, catalog_dir) {
                    (Some(f), None) => vec![f.clone()],
                    (None, Some(d)) => catalog_files(d)?,
                    _ => {
                        return Err(anyhow!(
                            "equivalence-suite needs a file, --catalog, or --builtin"
                        ))
                    }
                };
                for path in files {
                    let inst = load(cli, &path)?;
                    let Some(tw) = &inst.twisted else { continue };
                    for (sname, sub) in &inst.subgroupoids {
                        run_pair(&inst.name, tw, sname, sub)?;
                    }
                }
            }
            Ok(failed)
        }
    }
}

fn instance_twisted(inst: &Instance) -> Result<&TwistedGroupoid> {
    inst.twisted
        .as_ref()
        .ok_or_else(|| anyhow!("{}: this command needs a GROUPOID instance", inst.name))
}

fn info(inst: &Instance) {
    if let Some(tw) = &inst.twisted {
        let iso = gpd::isotropy(&tw.gpd);
        println!(
            "groupoid: {} elements, {} units, {} isotropy arrows, principal={}, \
             effective(finite)={}",
            tw.gpd.n_elements(),
            tw.gpd.n_units(),
            iso.len(),
            gpd::is_principal(&tw.gpd),
            gpd::is_effective_finite(&tw.gpd)
        );
        println!(
            "cocycle: modulus {}, trivial={}",
            tw.cocycle.modulus(),
            tw.cocycle.is_trivial()
        );
        for (name, sub) in &inst.subgroupoids {
            let rep = gpd::is_wide_normal(&tw.gpd, sub);
            println!(
                "subgroupoid {name}: {} members, wide={}, in_isotropy={}, normal={}, \
                 abelian_twist={}",
                sub.len(),
                rep.wide,
                rep.in_isotropy,
                rep.normal,
                tw.is_abelian_twist(sub)
            );
        }
    }
    if let Some(rot) = &inst.rotation {
        println!(
            "rotation: theta {}, lattice rank {} (k={}, m={}, n={})",
            rot.theta, rot.lattice.rank, rot.lattice.k, rot.lattice.m, rot.lattice.n
        );
    }
}

fn batch_check(
    cli: &Cli,
    file: &Option<PathBuf>,
    subgroupoid: &Option<String>,
    catalog_dir: &Option<PathBuf>,
    gate: fn(&ReportJson) -> bool,
) -> Result<bool> {
    let files = match (file, catalog_dir) {
        (Some(f), None) => vec![f.clone()],
        (None, Some(d)) => catalog_files(d)?,
        (Some(f), Some(d)) => {
            let mut v = vec![f.clone()];
            v.extend(catalog_files(d)?);
            v
        }
        (None, None) => return Err(anyhow!("give an instance file or --catalog")),
    };
    let mut failed = false;
    for path in files {
        let inst = load(cli, &path)?;
        let reports = instance_reports(&inst, subgroupoid.as_deref()).map_err(|e| anyhow!(e))?;
        for report in reports {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            failed |= !gate(&report);
        }
    }
    Ok(failed)
}

