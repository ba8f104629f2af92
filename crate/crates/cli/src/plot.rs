//! Plot-ready views of a region: counter-clockwise cycles for planar pieces,
//! vertex and facet lists for pieces in three dimensions.

use nashset::vecops::{dot, sub};
use nashset::{Polytope, RegionUnion};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub vertices: Vec<Vec<f64>>,
    /// Planar pieces: one counter-clockwise cycle over `vertices`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<usize>>,
    /// Pieces in ℝ³: each facet as a cycle, counter-clockwise seen from
    /// outside.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotData {
    pub dim: usize,
    pub pieces: Vec<Piece>,
    /// Connected groups of piece indices.
    pub groups: Vec<Vec<usize>>,
}

/// Order `points` counter-clockwise around their centroid in the plane
/// spanned by `(u, v)`.
fn ccw_order(points: &[Vec<f64>], u: &[f64], v: &[f64]) -> Vec<usize> {
    let n = points.len();
    let mut c = vec![0.0; points.first().map_or(0, Vec::len)];
    for p in points {
        for (ck, pk) in c.iter_mut().zip(p) {
            *ck += pk / n as f64;
        }
    }
    let mut idx: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d = sub(p, &c);
            (dot(&d, v).atan2(dot(&d, u)), i)
        })
        .collect();
    idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    idx.into_iter().map(|(_, i)| i).collect()
}

/// Two unit vectors orthogonal to `n` and to each other, with `u × v = n`.
fn plane_basis(n: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let s = dot(n, n).sqrt();
    let n: Vec<f64> = n.iter().map(|x| x / s).collect();
    let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let c = dot(&seed, &n);
    let mut u: Vec<f64> = seed.iter().zip(&n).map(|(a, b)| a - c * b).collect();
    let su = dot(&u, &u).sqrt();
    u.iter_mut().for_each(|x| *x /= su);
    let v = vec![n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]];
    (u, v)
}

fn planar(p: &Polytope) -> Piece {
    let vertices = p.vertices().to_vec();
    let cycle = ccw_order(&vertices, &[1.0, 0.0], &[0.0, 1.0]);
    Piece { vertices, cycle: Some(cycle), facets: None }
}

fn solid(p: &Polytope) -> Piece {
    let vertices = p.vertices().to_vec();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for h in p.halfspaces() {
        let scale = 1.0 + h.offset.abs();
        let tight: Vec<usize> = (0..vertices.len())
            .filter(|&i| (dot(&h.normal, &vertices[i]) - h.offset).abs() <= 1e-7 * scale)
            .collect();
        if tight.len() < 3 {
            continue;
        }
        let mut key = tight.clone();
        key.sort_unstable();
        if facets.iter().any(|f| {
            let mut g = f.clone();
            g.sort_unstable();
            g == key
        }) {
            continue;
        }
        let (u, v) = plane_basis(&h.normal);
        let pts: Vec<Vec<f64>> = tight.iter().map(|&i| vertices[i].clone()).collect();
        facets.push(ccw_order(&pts, &u, &v).into_iter().map(|k| tight[k]).collect());
    }
    Piece { vertices, cycle: None, facets: Some(facets) }
}

/// `None` when the region lives in more than three dimensions.
pub fn plot_data(r: &RegionUnion) -> Option<PlotData> {
    let pieces = match r.dim {
        1 | 2 => r.pieces.iter().map(planar_or_line).collect(),
        3 => r.pieces.iter().map(solid).collect(),
        _ => return None,
    };
    Some(PlotData { dim: r.dim, pieces, groups: r.connected_groups() })
}

fn planar_or_line(p: &Polytope) -> Piece {
    if p.dim() == 2 {
        return planar(p);
    }
    let mut vertices = p.vertices().to_vec();
    vertices.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let cycle = (0..vertices.len()).collect();
    Piece { vertices, cycle: Some(cycle), facets: None }
}

/// CSV rows `piece,group,facet,order,x,y[,z]`; planar pieces use facet 0.
pub fn to_csv(d: &PlotData) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let coords = ["x", "y", "z"];
    let mut header = vec!["piece", "group", "facet", "order"];
    header.extend(&coords[..d.dim.min(3)]);
    w.write_record(&header)?;
    let group_of = |k: usize| d.groups.iter().position(|g| g.contains(&k)).unwrap_or(0);
    for (k, p) in d.pieces.iter().enumerate() {
        let cycles: Vec<&Vec<usize>> = match (&p.cycle, &p.facets) {
            (Some(c), _) => vec![c],
            (None, Some(fs)) => fs.iter().collect(),
            _ => Vec::new(),
        };
        for (f, cyc) in cycles.iter().enumerate() {
            for (o, &i) in cyc.iter().enumerate() {
                let mut row = vec![k.to_string(), group_of(k).to_string(), f.to_string(), o.to_string()];
                row.extend(p.vertices[i].iter().map(|x| format!("{x:.16e}")));
                w.write_record(&row)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
/// Signed area of the cycle; positive for counter-clockwise order.
pub fn signed_area(points: &[Vec<f64>], cycle: &[usize]) -> f64 {
    let n = cycle.len();
    (0..n)
        .map(|k| {
            let a = &points[cycle[k]];
            let b = &points[cycle[(k + 1) % n]];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}
