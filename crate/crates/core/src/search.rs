//! Global maximization of scalar fields on the model geometries: a dense
//! quasi-uniform grid scan followed by projected gradient ascent from the
//! best separated grid candidates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::Point;

/// Ambient gradient per `CP1` factor, in the convention that the directional
/// derivative along `delta` is `Re sum conj(g_m) delta_m`.
pub type Gradient = Vec<[Complex64; 2]>;

#[derive(Debug, Clone, Copy)]
pub struct Candidate {
    pub value: f64,
    pub index: usize,
}

const CHUNK: usize = 2048;

/// Evaluates `m` fields at every grid point and keeps the `keep` best
/// candidates per field. Ties break by grid index, so the result does not
/// depend on the thread count.
pub fn scan_top<F>(grid: &[Point], m: usize, keep: usize, eval: F) -> Vec<Vec<Candidate>>
where
    F: Fn(&Point, &mut [f64]) + Sync,
{
    let partials: Vec<Vec<Vec<Candidate>>> = grid
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut tops = vec![Vec::with_capacity(keep + 1); m];
            let mut vals = vec![0.0; m];
            for (i, p) in chunk.iter().enumerate() {
                eval(p, &mut vals);
                let index = c * CHUNK + i;
                for (top, &value) in tops.iter_mut().zip(&vals) {
                    push_top(top, Candidate { value, index }, keep);
                }
            }
            tops
        })
        .collect();
    let mut out = vec![Vec::with_capacity(keep + 1); m];
    for part in partials {
        for (top, cands) in out.iter_mut().zip(part) {
            for cand in cands {
                push_top(top, cand, keep);
            }
        }
    }
    out
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.value > b.value || (a.value == b.value && a.index < b.index)
}

fn push_top(top: &mut Vec<Candidate>, cand: Candidate, keep: usize) {
    if top.len() == keep && !better(&cand, top.last().unwrap()) {
        return;
    }
    let pos = top.iter().position(|c| better(&cand, c)).unwrap_or(top.len());
    top.insert(pos, cand);
    top.truncate(keep);
}

/// Greedy pick of up to `count` candidates (best first) that are pairwise at
/// least `min_sep` apart.
pub fn separated(grid: &[Point], cands: &[Candidate], count: usize, min_sep: f64) -> Vec<Point> {
    let mut chosen: Vec<Point> = Vec::new();
    for c in cands {
        let p = grid[c.index];
        if chosen.iter().all(|q| q.distance(&p) >= min_sep) {
            chosen.push(p);
            if chosen.len() == count {
                break;
            }
        }
    }
    chosen
}

/// Removes the radial and phase components of an ambient gradient.
pub fn project_tangent(p: &Point, g: &mut Gradient) {
    for (f, gf) in p.factors().iter().zip(g.iter_mut()) {
        let v = f.coords();
        let c = v[0].conj() * gf[0] + v[1].conj() * gf[1];
        gf[0] -= c * v[0];
        gf[1] -= c * v[1];
    }
}

pub fn gradient_norm_sq(g: &Gradient) -> f64 {
    g.iter().map(|gf| gf[0].norm_sqr() + gf[1].norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy)]
pub struct Ascent {
    pub value: f64,
    pub point: Point,
    pub grad_norm: f64,
    pub steps: usize,
}

/// Projected gradient ascent with Armijo backtracking and renormalizing
/// retraction. `f` returns the value and the ambient gradient.
pub fn ascend<F>(start: Point, step0: f64, max_steps: usize, f: F) -> Ascent
where
    F: Fn(&Point) -> (f64, Gradient),
{
    let mut x = start;
    let (mut fx, mut g) = f(&x);
    project_tangent(&x, &mut g);
    let mut gn2 = gradient_norm_sq(&g);
    let mut step = step0;
    let mut steps = 0;
    while steps < max_steps && gn2 > 0.0 && fx.is_finite() {
        let mut t = step * 2.0;
        let mut accepted = None;
        for _ in 0..60 {
            let y = x.retract(&g, t);
            let (fy, gy) = f(&y);
            if fy >= fx + 1e-4 * t * gn2 {
                accepted = Some((y, fy, gy));
                break;
            }
            t *= 0.5;
        }
        let Some((y, fy, mut gy)) = accepted else { break };
        steps += 1;
        let gain = fy - fx;
        x = y;
        fx = fy;
        project_tangent(&x, &mut gy);
        g = gy;
        gn2 = gradient_norm_sq(&g);
        step = t;
        if gain <= 1e-16 * fx.abs().max(1e-300) {
            break;
        }
    }
    Ascent { value: fx, point: x, grad_norm: gn2.sqrt(), steps }
}
