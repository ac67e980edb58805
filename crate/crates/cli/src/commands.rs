use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use coxstrata::betti::{betti_row, series_coefficients};
use coxstrata::cohomology::{atom_table, basis_cup};
use coxstrata::goodsub::{bds_candidates, bds_covers_all, is_k_step_good, param_f};
use coxstrata::strata::{membership, ExtendedPoint, Membership};
use coxstrata::verify::{verify_type, Level};
use coxstrata::weyl::parabolic_summary;
use coxstrata::{CartanType, Family, IntersectionLattice, LatticeOptions, RootSet, RootSystem};
use num_bigint::BigInt;
use serde_json::json;

use crate::{cache, export, CliError, ExportFormat, Global, LevelArg, Method, TableFormat};

fn parse_type(s: &str) -> Result<CartanType, CliError> {
    Ok(s.parse()?)
}

fn is_huge(ctype: &CartanType) -> bool {
    ctype.as_irreducible() == Some((Family::E, 8))
}

fn lattice_options(g: &Global, ctype: &CartanType) -> Result<LatticeOptions, CliError> {
    if g.allow_huge {
        Ok(LatticeOptions::unbounded())
    } else if is_huge(ctype) {
        Err(CliError::Usage(format!(
            "{ctype} exceeds the default flat budget; pass --allow-huge to enumerate it"
        )))
    } else {
        Ok(LatticeOptions::default())
    }
}

fn cache_dir(g: &Global) -> Option<PathBuf> {
    if g.no_cache {
        return None;
    }
    g.cache_dir
        .clone()
        .or_else(|| std::env::var_os("COXSTRATA_CACHE").map(PathBuf::from))
        .or_else(|| Some(PathBuf::from(".coxstrata")))
}

/// The lattice of `ctype`, from the cache when a valid entry exists.
fn load_lattice(g: &Global, ctype: &CartanType) -> Result<IntersectionLattice, CliError> {
    let rs = Arc::new(RootSystem::build(ctype)?);
    let opts = lattice_options(g, ctype)?;
    let path = cache_dir(g).map(|d| cache::cache_path(&d, &rs));
    if let Some(p) = &path {
        if let Some(lat) = cache::read(p, &rs) {
            return Ok(lat);
        }
    }
    let lat = IntersectionLattice::build(rs, opts)?;
    if let Some(p) = &path {
        if let Err(e) = cache::write(p, &lat) {
            eprintln!("warning: could not write cache {}: {e}", p.display());
        }
    }
    Ok(lat)
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn coords(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    )
}

pub fn rootinfo(ctype: &str, as_json: bool) -> Result<(), CliError> {
    let rs = RootSystem::build(&parse_type(ctype)?)?;
    if as_json {
        let roots: Vec<_> = (0..rs.num_positive())
            .map(|i| {
                json!({
                    "index": i,
                    "coordinates": rs.root(i),
                    "simple_coefficients": rs.simple_coefficients(i),
                    "height": rs.height(i),
                })
            })
            .collect();
        let v = json!({
            "type": rs.ctype().to_string(),
            "rank": rs.rank(),
            "d": rs.num_positive(),
            "positive_roots": roots,
            "highest_root": rs.highest(),
            "labels": rs.labels(),
            "affine_adjacency": rs.affine_adjacency(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&v).expect("serializable")
        );
        return Ok(());
    }
    println!("type {}", rs.ctype());
    println!("rank {}", rs.rank());
    println!("positive roots {}", rs.num_positive());
    println!("index\theight\tcoefficients\tcoordinates");
    for i in 0..rs.num_positive() {
        println!(
            "{i}\t{}\t{}\t{}",
            rs.height(i),
            coords(rs.simple_coefficients(i)),
            coords(rs.root(i))
        );
    }
    println!(
        "highest root {} {}",
        rs.highest(),
        coords(rs.root(rs.highest()))
    );
    println!("labels {}", join(rs.labels()));
    println!("affine adjacency");
    for row in rs.affine_adjacency() {
        println!("  {}", join(row));
    }
    Ok(())
}

fn series_row(ctype: &CartanType) -> Result<Option<Vec<BigInt>>, CliError> {
    match ctype.as_irreducible() {
        Some((family, r)) if family.is_classical() => {
            Ok(Some(series_coefficients(family, r)?.swap_remove(r)))
        }
        _ => Ok(None),
    }
}

pub fn betti(g: &Global, ctype: &str, method: Method, compare: bool) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    RootSystem::build(&ctype)?;
    let enumerated = |g: &Global| -> Result<Vec<BigInt>, CliError> {
        Ok(load_lattice(g, &ctype)?
            .betti_row()
            .into_iter()
            .map(BigInt::from)
            .collect())
    };
    if !compare {
        let row = match method {
            Method::Formula => betti_row(&ctype)?,
            Method::Enum => enumerated(g)?,
            Method::Series => series_row(&ctype)?
                .ok_or_else(|| CliError::Usage(format!("no generating series for {ctype}")))?,
        };
        println!("{}", join(row));
        return Ok(());
    }
    let mut rows = vec![("formula", betti_row(&ctype)?)];
    if let Some(s) = series_row(&ctype)? {
        rows.push(("series", s));
    }
    if g.allow_huge || !is_huge(&ctype) {
        rows.push(("enum", enumerated(g)?));
    } else {
        println!("enum\tskipped (needs --allow-huge)");
    }
    for (name, row) in &rows {
        println!("{name}\t{}", join(row));
    }
    if rows.iter().all(|(_, r)| r == &rows[0].1) {
        println!("all methods agree");
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("methods disagree for {ctype}")))
    }
}

fn sweep(level: LevelArg) -> Vec<&'static str> {
    let mut types = vec![
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "G2",
    ];
    if level == LevelArg::Full {
        types.extend(["F4", "E6", "E7"]);
    }
    types
}

pub fn verify(g: &Global, ctype: Option<&str>, level: LevelArg) -> Result<(), CliError> {
    let lvl = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let types: Vec<CartanType> = match ctype {
        Some(t) => vec![parse_type(t)?],
        None => sweep(level)
            .into_iter()
            .map(parse_type)
            .collect::<Result<_, _>>()?,
    };
    let mut failures = Vec::new();
    for t in &types {
        let report = verify_type(t, lvl, lattice_options(g, t)?)?;
        print!("{report}");
        if let Some(c) = report.first_failure() {
            failures.push(format!(
                "{t} {}: {}",
                c.name,
                c.failure.as_deref().unwrap_or("")
            ));
        }
    }
    if ctype.is_none() && level == LevelArg::Full {
        let e8: CartanType = "E8".parse()?;
        if g.allow_huge {
            let got: Vec<BigInt> = load_lattice(g, &e8)?
                .betti_row()
                .into_iter()
                .map(BigInt::from)
                .collect();
            if got == betti_row(&e8)? {
                println!("PASS E8 betti-row");
            } else {
                println!("FAIL E8 betti-row: enumerated {}", join(&got));
                failures.push("E8 betti-row".into());
            }
        } else {
            println!("SKIP E8 betti-row (needs --allow-huge)");
        }
    }
    match failures.first() {
        None => Ok(()),
        Some(first) => Err(CliError::Mismatch(format!("first failure: {first}"))),
    }
}

pub fn lattice(
    g: &Global,
    ctype: &str,
    format: Option<ExportFormat>,
    output: Option<PathBuf>,
    import: Option<PathBuf>,
) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    let lat = load_lattice(g, &ctype)?;
    if let Some(path) = import {
        let text = fs::read_to_string(&path)?;
        let v: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let imported = export::from_json(&v)?;
        let same = imported.flats() == lat.flats() && imported.covers() == lat.covers();
        if !same {
            return Err(CliError::Mismatch(format!(
                "{} differs from the enumeration",
                path.display()
            )));
        }
        println!("import matches: {} flats", imported.len());
        return Ok(());
    }
    let text = match format {
        Some(ExportFormat::Json) => {
            serde_json::to_string_pretty(&export::to_json(&lat)).expect("serializable") + "\n"
        }
        Some(ExportFormat::Csv) => export::to_csv(&lat),
        None => {
            let mut s = String::new();
            let rs = lat.root_system();
            writeln!(
                s,
                "type {} rank {} d {}",
                rs.ctype(),
                rs.rank(),
                rs.num_positive()
            )
            .unwrap();
            writeln!(s, "flats {}", lat.len()).unwrap();
            writeln!(s, "flats by rank {}", join(lat.rank_counts())).unwrap();
            writeln!(s, "betti {}", join(lat.betti_row())).unwrap();
            writeln!(
                s,
                "characteristic polynomial {}",
                join(lat.char_poly().iter().rev())
            )
            .unwrap();
            s
        }
    };
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn roots_of(s: RootSet) -> String {
    format!(
        "{{{}}}",
        s.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

pub fn good(g: &Global, ctype: &str, bds: bool, classical_param: bool) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    let lat = load_lattice(g, &ctype)?;
    let rs = lat.root_system();
    let r = rs.rank();
    let ids: Vec<usize> = if r == 0 {
        Vec::new()
    } else {
        lat.ids_of_rank(r - 1).collect()
    };
    println!("good subsystems {}", ids.len());
    for &id in &ids {
        let s = lat.flats()[id].subsystem;
        let mut line = format!("{id}\t{}\t{}", rs.classify_subsystem(s)?, roots_of(s));
        if classical_param {
            write!(line, "\t{}", param_f(rs, s)?).unwrap();
        }
        println!("{line}");
    }
    if bds {
        println!("borel-de siebenthal candidates");
        for c in bds_candidates(rs)? {
            let good = is_k_step_good(rs, c.subsystem, 1);
            println!(
                "({},{})\t{}\t{}\t{}",
                c.removed.0,
                c.removed.1,
                rs.classify_subsystem(rs.closure(c.subsystem))?,
                roots_of(c.subsystem),
                if good { "good" } else { "not good" }
            );
        }
        let all = bds_covers_all(rs)?;
        println!(
            "covers all good subsystems: {}",
            if all { "yes" } else { "no" }
        );
        if !all {
            return Err(CliError::Mismatch(
                "candidates miss a W-class of good subsystems".into(),
            ));
        }
    }
    Ok(())
}

pub fn orbits(g: &Global, ctype: &str) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    let lat = load_lattice(g, &ctype)?;
    let summary = parabolic_summary(&lat)?;
    println!("|W| = {}", summary.weyl_order);
    for (k, group) in summary.per_rank.iter().enumerate() {
        println!("rank {k}: {} orbits", group.len());
        for o in group {
            println!(
                "  flat {}\tsize {}\tstabilizer {}\ttype {}",
                o.representative, o.size, o.stabilizer_order, o.ctype
            );
        }
    }
    println!(
        "parabolic classes {} (at most {})",
        summary.orbit_count(),
        1u64 << lat.rank()
    );
    Ok(())
}

pub fn cup(
    g: &Global,
    ctype: &str,
    ids: &[usize],
    table: bool,
    format: TableFormat,
) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    let lat = load_lattice(g, &ctype)?;
    if table {
        let t = atom_table(&lat);
        let atoms: Vec<usize> = if lat.rank() == 0 {
            Vec::new()
        } else {
            lat.ids_of_rank(1).collect()
        };
        match format {
            TableFormat::Json => {
                let v = json!({
                    "type": ctype.to_string(),
                    "atoms": atoms,
                    "flats": lat.len(),
                    "table": t,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                );
            }
            TableFormat::Markdown => {
                println!("| ⌣ | {} |", join(0..lat.len()).replace(' ', " | "));
                println!("|---|{}", "---|".repeat(lat.len()));
                for (a, row) in atoms.iter().zip(t) {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| c.map_or_else(|| "·".to_string(), |z| z.to_string()))
                        .collect();
                    println!("| {a} | {} |", cells.join(" | "));
                }
            }
        }
        return Ok(());
    }
    let (&first, rest) = ids
        .split_first()
        .ok_or_else(|| CliError::Usage("give flat ids to multiply, or --table".into()))?;
    lat.flat(first)?;
    let mut acc = Some(first);
    for &y in rest {
        lat.flat(y)?;
        acc = match acc {
            Some(x) => basis_cup(&lat, x, y)?,
            None => None,
        };
    }
    match acc {
        Some(z) => println!("ξ{z} (rank {})", lat.flats()[z].rank),
        None => println!("0"),
    }
    Ok(())
}

pub fn member(g: &Global, ctype: &str, point: &str) -> Result<(), CliError> {
    let ctype = parse_type(ctype)?;
    let p: ExtendedPoint = point.parse()?;
    let lat = load_lattice(g, &ctype)?;
    let rs = lat.root_system();
    match membership(&lat, &p)? {
        Membership::Stratum { flat, witness } => {
            let f = lat.flats()[flat];
            println!("stratum rank {}", rs.rank() - f.rank);
            println!(
                "flat {flat} type {} roots {}",
                rs.classify_subsystem(f.subsystem)?,
                roots_of(f.subsystem)
            );
            let values: Vec<String> = witness
                .basis()
                .iter()
                .zip(witness.values())
                .map(|(b, v)| format!("{b}:{v}"))
                .collect();
            println!("witness {}", values.join(" "));
        }
        Membership::NotInVariety(v) => println!("not in variety: {v}"),
    }
    Ok(())
}
