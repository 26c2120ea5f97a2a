//! Command dispatch: each command produces a deterministic JSON report with
//! top-level keys `command`, `inputs`, `result`, `witnesses`, `notes`.

use serde_json::{json, Map, Value};

use nestlab_core::conjugacy::{inner_conjugate, recover_summands_from_k0};
use nestlab_core::embedding::{Embedding, GHom, K0Matrix, OrderFlags};
use nestlab_core::lift::{lift_ghom, LiftMode};
use nestlab_core::structure::{
    is_refinement_type, is_t2_degenerate, multiplicity_signature, signature_k0_rows,
    structure_verdict, GroupType,
};
use nestlab_core::system::{inv_compare, DirectSystem, LimitElement, ScaleKind, Verdict};
use nestlab_core::{corpus, Cell, NestAlgebra};

use crate::parser::Workspace;

/// Search bounds shared by the bounded commands.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Stages explored by colimit-level decisions (`scale`).
    pub horizon: usize,
    /// Commuting triangles required by `compare`.
    pub depth: usize,
    /// Largest multiplicity-matrix entry allowed in `compare` crossovers.
    pub bound: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            horizon: 8,
            depth: 2,
            bound: 2,
        }
    }
}

/// A failed run: usage errors (bad arguments) exit with status 2, domain
/// errors (names, validation, infeasible requests) with status 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn domain_err(m: impl std::fmt::Display) -> CliError {
    CliError::Domain(m.to_string())
}

type CliResult<T> = Result<T, CliError>;

// ---------------------------------------------------------------- helpers

fn algebra_str(a: &NestAlgebra) -> String {
    a.to_string()
}

fn summands_json(phi: &Embedding) -> Value {
    Value::Array(
        phi.summands()
            .iter()
            .map(|s| json!(s.atoms()))
            .collect(),
    )
}

fn flags_json(f: &OrderFlags) -> Value {
    json!({
        "regular": f.regular,
        "loc": f.loc,
        "lop": f.lop,
        "oc": f.oc,
        "op": f.op,
    })
}

fn cell_json(c: &Cell) -> Value {
    json!([c.row, c.col])
}

fn cells_json(cells: &[Cell]) -> Value {
    Value::Array(cells.iter().map(cell_json).collect())
}

fn embedding_io_json(phi: &Embedding) -> Value {
    json!({
        "domain": algebra_str(phi.domain()),
        "codomain": algebra_str(phi.codomain()),
        "summands": summands_json(phi),
    })
}

fn group_type_str(t: GroupType) -> &'static str {
    match t {
        GroupType::RefinementType => "refinement-type",
        GroupType::T2Degenerate => "t2-degenerate",
        GroupType::Both => "both",
        GroupType::Neither => "neither",
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

fn report(
    command: &str,
    inputs: Value,
    result: Value,
    witnesses: Value,
    notes: Vec<String>,
) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), inputs);
    m.insert("result".into(), result);
    m.insert("witnesses".into(), witnesses);
    m.insert("notes".into(), json!(notes));
    Value::Object(m)
}

fn get_embedding<'a>(ws: &'a Workspace, name: &str) -> CliResult<&'a Embedding> {
    ws.embeddings
        .get(name)
        .ok_or_else(|| CliError::Domain(format!("unknown embedding '{name}'")))
}

fn get_system<'a>(ws: &'a Workspace, name: &str) -> CliResult<&'a DirectSystem> {
    ws.systems
        .get(name)
        .map(|(_, _, s)| s)
        .ok_or_else(|| CliError::Domain(format!("unknown system '{name}'")))
}

/// The K0 matrix of a named embedding or ghom.
fn get_k0(ws: &Workspace, name: &str) -> CliResult<(K0Matrix, &'static str)> {
    if let Some(phi) = ws.embeddings.get(name) {
        Ok((phi.k0_matrix(), "embedding"))
    } else if let Some(g) = ws.ghoms.get(name) {
        Ok((g.k0_matrix(), "ghom"))
    } else {
        Err(CliError::Domain(format!(
            "unknown embedding or ghom '{name}'"
        )))
    }
}

fn one_name<'a>(args: &'a [String], command: &str) -> CliResult<&'a str> {
    match args {
        [name] => Ok(name),
        _ => Err(usage(format!("{command} takes exactly one name"))),
    }
}

// ---------------------------------------------------------------- commands

fn cmd_classify(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "classify")?;
    let phi = get_embedding(ws, name)?;
    let flags = phi.classify_order_properties();
    let mut witnesses = Map::new();
    if !flags.oc {
        if let Some((support, image)) = phi.oc_failure_witness() {
            witnesses.insert(
                "oc_failure".into(),
                json!({ "support": cells_json(&support), "image": cells_json(&image) }),
            );
        }
    }
    if !flags.loc {
        if let Some((cell, image)) = phi.loc_failure_cell() {
            witnesses.insert(
                "loc_failure".into(),
                json!({ "cell": cell_json(&cell), "image": cells_json(&image) }),
            );
        }
    }
    if !flags.lop {
        if let Some((cell, image)) = phi.lop_failure_cell() {
            witnesses.insert(
                "lop_failure".into(),
                json!({ "cell": cell_json(&cell), "image": cells_json(&image) }),
            );
        }
    }
    Ok(report(
        "classify",
        json!({ "name": name, "embedding": embedding_io_json(phi) }),
        flags_json(&flags),
        Value::Object(witnesses),
        vec![],
    ))
}

fn cmd_decompose(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "decompose")?;
    let phi = get_embedding(ws, name)?;
    let verdict = structure_verdict(phi);
    let groups: Vec<Value> = verdict
        .decomposition
        .groups()
        .iter()
        .zip(verdict.decomposition.hulls())
        .zip(&verdict.types)
        .map(|((g, hull), t)| {
            json!({
                "summands": summands_json(g),
                "multiplicity": g.multiplicity(),
                "hull": [hull.0, hull.1],
                "type": group_type_str(*t),
            })
        })
        .collect();
    let result = json!({
        "groups": groups,
        "irreducible": groups.len() == 1,
        "claims": {
            "triangular_all_refinement": verdict.triangular_all_refinement,
            "no_rank_one_dichotomy": verdict.no_rank_one_dichotomy,
        },
    });
    Ok(report(
        "decompose",
        json!({ "name": name, "embedding": embedding_io_json(phi) }),
        result,
        json!({}),
        vec![],
    ))
}

fn cmd_k0(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "k0")?;
    let (k, source) = get_k0(ws, name)?;
    let mut result = Map::new();
    result.insert("matrix".into(), json!(k.entries()));
    result.insert("display".into(), json!(k.display_form()));
    result.insert("column_sums".into(), json!(k.column_sums()));
    result.insert(
        "unital".into(),
        json!(k.weighted_row_sums()
            == k.codomain()
                .atom_ranks()
                .iter()
                .map(|&r| r as i64)
                .collect::<Vec<i64>>()),
    );
    let mut notes = vec![format!("source object '{name}' ({source})")];
    if let Some(phi) = ws.embeddings.get(name) {
        if is_t2_degenerate(phi) {
            let sig = multiplicity_signature(phi).map_err(domain_err)?;
            let m = phi.domain().atom_ranks()[0] as i64;
            let same_rank = phi
                .domain()
                .atom_ranks()
                .iter()
                .all(|&r| r as i64 == m);
            result.insert("signature".into(), json!(sig));
            if same_rank {
                let (row1, row2) = signature_k0_rows(&sig, m);
                let display = k.display_form();
                let matches = display.len() == 2 && display[0] == row1 && display[1] == row2
                    || display.len() == 1 && row2.iter().all(|&v| v == 0) && display[0] == row1;
                result.insert("signature_matches_k0".into(), json!(matches));
            } else {
                result.insert("signature_matches_k0".into(), Value::Null);
            }
            notes.push("image meets at most two codomain atoms".into());
        } else {
            result.insert("signature".into(), Value::Null);
            result.insert("signature_matches_k0".into(), Value::Null);
        }
    }
    Ok(report(
        "k0",
        json!({
            "name": name,
            "domain": algebra_str(k.domain()),
            "codomain": algebra_str(k.codomain()),
        }),
        Value::Object(result),
        json!({}),
        notes,
    ))
}

fn cmd_gmap(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "gmap")?;
    let g = if let Some(phi) = ws.embeddings.get(name) {
        phi.g_map()
    } else if let Some(g) = ws.ghoms.get(name) {
        g.clone()
    } else {
        return Err(CliError::Domain(format!(
            "unknown embedding or ghom '{name}'"
        )));
    };
    Ok(report(
        "gmap",
        json!({
            "name": name,
            "domain": algebra_str(g.domain()),
            "codomain": algebra_str(g.codomain()),
        }),
        ghom_json(&g),
        json!({}),
        vec![],
    ))
}

fn ghom_json(g: &GHom) -> Value {
    let cells: Vec<Value> = g
        .images()
        .iter()
        .map(|(c, img)| {
            let entries: Vec<Value> = img
                .entries()
                .iter()
                .map(|(cc, v)| json!({ "cell": cell_json(cc), "count": v }))
                .collect();
            json!({ "cell": cell_json(c), "image": entries })
        })
        .collect();
    json!({
        "cells": cells,
        "cellwise_staircase": g.is_cellwise_staircase(),
        "cellwise_strictly_monotone": g.is_cellwise_strictly_monotone(),
    })
}

fn cmd_conjugate(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let [a, b] = args else {
        return Err(usage("conjugate takes exactly two embedding names"));
    };
    let phi = get_embedding(ws, a)?;
    let psi = get_embedding(ws, b)?;
    if phi.domain() != psi.domain() || phi.codomain() != psi.codomain() {
        return Err(CliError::Domain(
            "embeddings must share domain and codomain".into(),
        ));
    }
    let witness = inner_conjugate(phi, psi);
    let mut witnesses = Map::new();
    if let Some(u) = &witness {
        let total = phi.codomain().total_rank();
        let sigma: Vec<usize> = (1..=total).map(|p| u.apply(p)).collect();
        witnesses.insert("permutation".into(), json!(sigma));
    }
    Ok(report(
        "conjugate",
        json!({
            "first": { "name": a, "embedding": embedding_io_json(phi) },
            "second": { "name": b, "embedding": embedding_io_json(psi) },
        }),
        json!({ "conjugate": witness.is_some() }),
        Value::Object(witnesses),
        vec![],
    ))
}

fn cmd_recover(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "recover")?;
    let (k, source) = get_k0(ws, name)?;
    let summands =
        recover_summands_from_k0(k.domain(), k.codomain(), &k).map_err(domain_err)?;
    let lists: Vec<Value> = summands.iter().map(|s| json!(s.atoms())).collect();
    Ok(report(
        "recover",
        json!({
            "name": name,
            "domain": algebra_str(k.domain()),
            "codomain": algebra_str(k.codomain()),
            "matrix": k.entries(),
        }),
        json!({ "summands": lists }),
        json!({}),
        vec![format!(
            "summands of the unique locally order conserving realization of the \
             multiplicity matrix of {source} '{name}'"
        )],
    ))
}

fn cmd_lift(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let (name, mode, mode_str) = match args {
        [name] => (name, LiftMode::Loc, "loc"),
        [name, m] if m == "loc" => (name, LiftMode::Loc, "loc"),
        [name, m] if m == "op" => (name, LiftMode::Op, "op"),
        _ => return Err(usage("lift takes a ghom name and an optional mode (loc|op)")),
    };
    let g = ws
        .ghoms
        .get(name)
        .ok_or_else(|| CliError::Domain(format!("unknown ghom '{name}'")))?;
    let phi = lift_ghom(g, mode).map_err(domain_err)?;
    Ok(report(
        "lift",
        json!({
            "name": name,
            "mode": mode_str,
            "domain": algebra_str(g.domain()),
            "codomain": algebra_str(g.codomain()),
        }),
        json!({
            "summands": summands_json(&phi),
            "flags": flags_json(&phi.classify_order_properties()),
        }),
        json!({}),
        vec![],
    ))
}

fn cmd_compose(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let [outer, inner] = args else {
        return Err(usage(
            "compose takes two embedding names: the outer then the inner map",
        ));
    };
    let psi = get_embedding(ws, outer)?;
    let phi = get_embedding(ws, inner)?;
    let comp = psi.compose(phi).map_err(domain_err)?;
    Ok(report(
        "compose",
        json!({
            "outer": { "name": outer, "embedding": embedding_io_json(psi) },
            "inner": { "name": inner, "embedding": embedding_io_json(phi) },
        }),
        json!({
            "embedding": embedding_io_json(&comp),
            "flags": flags_json(&comp.classify_order_properties()),
        }),
        json!({}),
        vec![],
    ))
}

fn cmd_system_classify(ws: &Workspace, args: &[String]) -> CliResult<Value> {
    let name = one_name(args, "system-classify")?;
    let sys = get_system(ws, name)?;
    let rep = sys.report();
    let composites: Vec<Value> = rep
        .composite_flags
        .iter()
        .map(|((k, l), f)| json!({ "from": k, "to": l, "flags": flags_json(f) }))
        .collect();
    Ok(report(
        "system-classify",
        json!({
            "name": name,
            "stages": sys
                .stages()
                .iter()
                .map(algebra_str)
                .collect::<Vec<String>>(),
        }),
        json!({
            "composites": composites,
            "families": {
                "floc": rep.sys_floc,
                "foc": rep.sys_foc,
                "flop": rep.sys_flop,
                "fop": rep.sys_fop,
            },
        }),
        json!({}),
        vec![],
    ))
}

fn cmd_scale(ws: &Workspace, args: &[String], opts: &Options) -> CliResult<Value> {
    let [sys_name, elem_name, stage, kind] = args else {
        return Err(usage(
            "scale takes: SYSTEM ELEMENT STAGE KIND (kind: sigma|sigma0|sigma-oc|sigma-op)",
        ));
    };
    let sys = get_system(ws, sys_name)?;
    let (_, value) = ws
        .elements
        .get(elem_name)
        .ok_or_else(|| CliError::Domain(format!("unknown element '{elem_name}'")))?;
    let stage: usize = stage
        .parse()
        .map_err(|_| usage(format!("bad stage index '{stage}'")))?;
    let which = match kind.as_str() {
        "sigma" => ScaleKind::Sigma,
        "sigma0" => ScaleKind::Sigma0,
        "sigma-oc" => ScaleKind::SigmaOc,
        "sigma-op" => ScaleKind::SigmaOp,
        other => return Err(usage(format!("unknown scale kind '{other}'"))),
    };
    let e = LimitElement {
        stage,
        value: value.clone(),
    };
    let verdict = sys
        .scale_membership(&e, which, opts.horizon)
        .map_err(domain_err)?;
    Ok(report(
        "scale",
        json!({
            "system": sys_name,
            "element": elem_name,
            "stage": stage,
            "kind": kind,
            "horizon": opts.horizon,
        }),
        json!({ "verdict": verdict_str(verdict) }),
        json!({}),
        vec![],
    ))
}

fn cmd_compare(ws: &Workspace, args: &[String], opts: &Options) -> CliResult<Value> {
    let [a, b] = args else {
        return Err(usage("compare takes exactly two system names"));
    };
    let sys_a = get_system(ws, a)?;
    let sys_b = get_system(ws, b)?;
    let found = inv_compare(sys_a, sys_b, opts.depth, opts.bound).map_err(domain_err)?;
    let mut witnesses = Map::new();
    if let Some(tw) = &found {
        let crossovers: Vec<Value> = tw.crossovers.iter().map(embedding_io_json).collect();
        witnesses.insert("crossovers".into(), Value::Array(crossovers));
    }
    Ok(report(
        "compare",
        json!({ "first": a, "second": b, "depth": opts.depth, "bound": opts.bound }),
        json!({ "intertwining_found": found.is_some() }),
        Value::Object(witnesses),
        vec![
            "a negative result means the bounded search exhausted, not that no \
             intertwining exists"
                .to_string(),
        ],
    ))
}

/// The built-in example gallery: each item re-derives a headline fact and
/// reports pass/fail.
fn cmd_examples() -> CliResult<Value> {
    let mut items: Vec<Value> = Vec::new();
    let mut push = |name: &str, description: &str, pass: bool| {
        items.push(json!({ "name": name, "description": description, "pass": pass }));
    };

    let phi1 = corpus::phi1();
    let v1 = structure_verdict(&phi1);
    push(
        "phi1-decomposition",
        "T(2,2,2) -> T(6,8,10): three groups with multiplicities (2,1,1), all \
         meeting at most two codomain atoms",
        v1.decomposition.multiplicities() == vec![2, 1, 1]
            && v1.decomposition.groups().iter().all(is_t2_degenerate),
    );
    push(
        "phi1-order-conserving",
        "the same map is order conserving",
        phi1.classify_order_properties().oc,
    );

    let phi2 = corpus::phi2();
    push(
        "phi2-k0-display",
        "T(1,1,1,1) -> T(4,4): rank-weighted multiplicity matrix \
         [[2,1,1,0],[0,1,1,2]]",
        phi2.k0_matrix().display_form() == vec![vec![2, 1, 1, 0], vec![0, 1, 1, 2]],
    );
    push(
        "phi2-signature",
        "its multiplicity signature is (0,1,0,1,0) and reproduces the display rows",
        multiplicity_signature(&phi2).ok() == Some(vec![0, 1, 0, 1, 0]) && {
            let (r1, r2) = signature_k0_rows(&[0, 1, 0, 1, 0], 1);
            vec![r1, r2] == phi2.k0_matrix().display_form()
        },
    );
    push(
        "phi2-not-refinement",
        "the map is order-irreducible but not refinement type",
        !is_refinement_type(&phi2).0
            && structure_verdict(&phi2).decomposition.groups().len() == 1,
    );

    let phi3 = corpus::phi3();
    push(
        "phi3-neither",
        "T(2,2,1) -> T(6,3,1): order conserving, order-irreducible, and neither \
         refinement type nor two-atom degenerate",
        {
            let v = structure_verdict(&phi3);
            phi3.classify_order_properties().oc
                && v.types.as_slice() == [GroupType::Neither]
        },
    );

    let phi4 = corpus::phi4();
    let f4 = phi4.classify_order_properties();
    push(
        "phi4-order-preserving",
        "T(2,2) -> T(2,2,2,2) on atoms (1,3),(2,4): order preserving but not \
         order conserving",
        f4.op && !f4.oc,
    );

    let phi5 = corpus::phi5();
    let f5 = phi5.classify_order_properties();
    push(
        "phi5-oc-not-lop",
        "T(1,1) -> T(3,3) with summands (1,1),(1,2),(2,2): order conserving but \
         not locally order preserving",
        f5.oc && !f5.lop,
    );

    let phi6a = corpus::phi6a();
    let phi6b = corpus::phi6b();
    let comp = phi6b.compose(&phi6a);
    push(
        "phi6-composite",
        "a locally order conserving composite whose outer factor is not locally \
         order conserving; the failing cell avoids the inner bimodule support",
        comp.map(|c| {
            c.classify_order_properties().loc
                && !phi6b.classify_order_properties().loc
                && phi6b
                    .loc_failure_cell()
                    .map(|(cell, _)| !phi6a.bimodule_cells().cells().contains(&cell))
                    .unwrap_or(false)
        })
        .unwrap_or(false),
    );

    let std_sys = DirectSystem::from_maps(corpus::standard_chain(4));
    let ref_sys = DirectSystem::from_maps(corpus::refinement_chain(4));
    push(
        "chains-order-conserving",
        "the doubling chains (two copies / interleaved refinement) are order \
         conserving at every composite",
        match (std_sys, ref_sys) {
            (Ok(s), Ok(r)) => s.report().sys_foc && r.report().sys_foc,
            _ => false,
        },
    );

    let all_pass = items
        .iter()
        .all(|i| i["pass"].as_bool().unwrap_or(false));
    Ok(report(
        "examples",
        json!({}),
        json!({ "items": items, "all_pass": all_pass }),
        json!({}),
        vec![],
    ))
}

/// Runs one command against a parsed workspace.
pub fn run(
    command: &str,
    ws: &Workspace,
    args: &[String],
    opts: &Options,
) -> CliResult<Value> {
    match command {
        "classify" => cmd_classify(ws, args),
        "decompose" => cmd_decompose(ws, args),
        "k0" => cmd_k0(ws, args),
        "gmap" => cmd_gmap(ws, args),
        "conjugate" => cmd_conjugate(ws, args),
        "recover" => cmd_recover(ws, args),
        "lift" => cmd_lift(ws, args),
        "compose" => cmd_compose(ws, args),
        "system-classify" => cmd_system_classify(ws, args),
        "scale" => cmd_scale(ws, args, opts),
        "compare" => cmd_compare(ws, args, opts),
        "examples" => cmd_examples(),
        other => Err(usage(format!("unknown command '{other}'"))),
    }
}

/// A short human-readable summary of a report, printed above the JSON.
pub fn summarize(report: &Value) -> String {
    let command = report["command"].as_str().unwrap_or("?");
    let result = &report["result"];
    match command {
        "classify" => format!(
            "classify: regular={} loc={} lop={} oc={} op={}",
            result["regular"], result["loc"], result["lop"], result["oc"], result["op"]
        ),
        "decompose" => format!(
            "decompose: {} group(s), irreducible={}",
            result["groups"].as_array().map(Vec::len).unwrap_or(0),
            result["irreducible"]
        ),
        "k0" => format!("k0: display={}", result["display"]),
        "gmap" => format!(
            "gmap: {} cell(s), cellwise staircase={}",
            result["cells"].as_array().map(Vec::len).unwrap_or(0),
            result["cellwise_staircase"]
        ),
        "conjugate" => format!("conjugate: {}", result["conjugate"]),
        "recover" => format!("recover: summands={}", result["summands"]),
        "lift" => format!("lift: summands={}", result["summands"]),
        "compose" => format!("compose: summands={}", result["embedding"]["summands"]),
        "system-classify" => format!(
            "system-classify: floc={} foc={} flop={} fop={}",
            result["families"]["floc"],
            result["families"]["foc"],
            result["families"]["flop"],
            result["families"]["fop"]
        ),
        "scale" => format!("scale: {}", result["verdict"]),
        "compare" => format!("compare: intertwining found={}", result["intertwining_found"]),
        "examples" => format!(
            "examples: {} item(s), all pass={}",
            result["items"].as_array().map(Vec::len).unwrap_or(0),
            result["all_pass"]
        ),
        _ => String::new(),
    }
}
