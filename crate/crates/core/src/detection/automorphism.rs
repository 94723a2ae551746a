//! Automorphism search for colored graphs with two edge sorts.
//!
//! Iterated equitable color refinement (neighbor-color multisets, the two
//! edge sorts signed separately) plus backtracking individualization. The
//! generator set comes from a stabilizer chain: for the first node of the
//! smallest non-singleton cell, one transversal automorphism per orbit
//! point plus the generators of its stabilizer; the group order is the
//! product of orbit sizes along the chain. Every candidate bijection is
//! verified edge-by-edge before being accepted.

use std::collections::BTreeMap;

use super::{ColoredGraph, DetectError};

/// A generator set of the automorphism group, with the exact order. The
/// identity is never reported as a generator.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub generators: Vec<Vec<usize>>,
    pub order: u128,
}

struct Ctx<'a> {
    g: &'a ColoredGraph,
    adj1: Vec<Vec<usize>>,
    adj2: Vec<Vec<usize>>,
}

type Sig = (u32, Vec<u32>, Vec<u32>);

fn adjacency(n: usize, edges: &std::collections::BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn signatures(ctx: &Ctx, colors: &[u32]) -> Vec<Sig> {
    (0..colors.len())
        .map(|v| {
            let mut a: Vec<u32> = ctx.adj1[v].iter().map(|&u| colors[u]).collect();
            a.sort_unstable();
            let mut b: Vec<u32> = ctx.adj2[v].iter().map(|&u| colors[u]).collect();
            b.sort_unstable();
            (colors[v], a, b)
        })
        .collect()
}

fn color_count(colors: &[u32]) -> usize {
    colors.iter().collect::<std::collections::BTreeSet<_>>().len()
}

fn renumber(sigs: &[Sig]) -> Vec<u32> {
    let mut uniq: Vec<&Sig> = sigs.iter().collect();
    uniq.sort();
    uniq.dedup();
    let index: BTreeMap<&Sig, u32> = uniq.into_iter().zip(0u32..).collect();
    sigs.iter().map(|s| index[s]).collect()
}

/// Refines one coloring to an equitable one; new color ids are canonical
/// with respect to sorted signatures, so refinement commutes with
/// automorphisms.
fn refine_one(ctx: &Ctx, mut colors: Vec<u32>) -> Vec<u32> {
    loop {
        let before = color_count(&colors);
        let new = renumber(&signatures(ctx, &colors));
        let stable = color_count(&new) == before;
        colors = new;
        if stable {
            return colors;
        }
    }
}

/// Refines two colorings in lockstep with a shared signature table;
/// `None` when their signature multisets diverge (no automorphism can
/// relate the two individualization paths).
fn refine_pair(ctx: &Ctx, mut ca: Vec<u32>, mut cb: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
    loop {
        let sa = signatures(ctx, &ca);
        let sb = signatures(ctx, &cb);
        let mut ma = sa.clone();
        ma.sort();
        let mut mb = sb.clone();
        mb.sort();
        if ma != mb {
            return None;
        }
        let index: BTreeMap<&Sig, u32> = {
            let mut uniq: Vec<&Sig> = ma.iter().collect();
            uniq.dedup();
            uniq.into_iter().zip(0u32..).collect()
        };
        let na: Vec<u32> = sa.iter().map(|s| index[s]).collect();
        let nb: Vec<u32> = sb.iter().map(|s| index[s]).collect();
        let stable = color_count(&na) == color_count(&ca);
        ca = na;
        cb = nb;
        if stable {
            return Some((ca, cb));
        }
    }
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
    let mut out = colors.to_vec();
    out[v] = fresh;
    out
}

fn cells(colors: &[u32]) -> BTreeMap<u32, Vec<usize>> {
    let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        out.entry(c).or_default().push(v);
    }
    out
}

/// The smallest non-singleton cell, ties broken by color value.
fn target_cell(colors: &[u32]) -> Option<(u32, Vec<usize>)> {
    cells(colors)
        .into_iter()
        .filter(|(_, members)| members.len() > 1)
        .min_by_key(|(c, members)| (members.len(), *c))
}

/// True iff `pi` is a bijection preserving node colors and both edge sets
/// exactly.
pub fn is_automorphism(g: &ColoredGraph, pi: &[usize]) -> bool {
    let n = g.node_count();
    if pi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &image in pi {
        if image >= n || seen[image] {
            return false;
        }
        seen[image] = true;
    }
    if (0..n).any(|v| g.colors[pi[v]] != g.colors[v]) {
        return false;
    }
    let maps = |edges: &std::collections::BTreeSet<(usize, usize)>| {
        edges.iter().all(|&(a, b)| {
            let (x, y) = (pi[a].min(pi[b]), pi[a].max(pi[b]));
            edges.contains(&(x, y))
        })
    };
    maps(&g.e1) && maps(&g.e2)
}

/// Backtracking search for one automorphism compatible with the two
/// individualized colorings; complete relative to the refinement.
fn search_map(ctx: &Ctx, ca: Vec<u32>, cb: Vec<u32>) -> Option<Vec<usize>> {
    let (ca, cb) = refine_pair(ctx, ca, cb)?;
    match target_cell(&ca) {
        None => {
            // Both discrete: pair nodes by color and verify.
            let pos_b: BTreeMap<u32, usize> =
                cb.iter().enumerate().map(|(v, &c)| (c, v)).collect();
            let pi: Vec<usize> = ca.iter().map(|c| pos_b[c]).collect();
            is_automorphism(ctx.g, &pi).then_some(pi)
        }
        Some((color, cell_a)) => {
            let a = cell_a[0];
            let cb_cells = cells(&cb);
            for &b in &cb_cells[&color] {
                if let Some(pi) = search_map(ctx, individualize(&ca, a), individualize(&cb, b)) {
                    return Some(pi);
                }
            }
            None
        }
    }
}

fn generators_rec(ctx: &Ctx, colors: Vec<u32>) -> (Vec<Vec<usize>>, u128) {
    let Some((_, cell)) = target_cell(&colors) else {
        return (Vec::new(), 1);
    };
    let v = cell[0];
    let stabilizer_coloring = refine_one(ctx, individualize(&colors, v));
    let (mut generators, stabilizer_order) = generators_rec(ctx, stabilizer_coloring);
    let mut orbit: u128 = 1;
    for &u in &cell[1..] {
        if let Some(pi) = search_map(ctx, individualize(&colors, v), individualize(&colors, u)) {
            generators.push(pi);
            orbit += 1;
        }
    }
    (generators, orbit.saturating_mul(stabilizer_order))
}

/// Generator set and order of the color- and (E1, E2)-preserving
/// automorphism group.
pub fn find_automorphisms(g: &ColoredGraph) -> Result<AutomorphismGroup, DetectError> {
    let n = g.node_count();
    for &(a, b) in g.e1.iter().chain(g.e2.iter()) {
        if a >= n || b >= n {
            return Err(DetectError::BadGraph(format!("edge ({a}, {b}) out of range")));
        }
        if a == b {
            return Err(DetectError::BadGraph(format!("self-loop on node {a}")));
        }
    }
    let ctx = Ctx { g, adj1: adjacency(n, &g.e1), adj2: adjacency(n, &g.e2) };
    let base = refine_one(&ctx, g.colors.clone());
    let (generators, order) = generators_rec(&ctx, base);
    for pi in &generators {
        if !is_automorphism(g, pi) {
            return Err(DetectError::Internal("search produced a non-automorphism".into()));
        }
    }
    Ok(AutomorphismGroup { generators, order })
}
