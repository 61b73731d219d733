//! Integer symplectic matrices: the principal congruence subgroups
//! `Gamma_n(N)`, enumeration of their elements in a Frobenius-norm ball and
//! a binary cache for enumerated balls.

use std::cmp::Ordering;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::symplectic::SymplecticMatrix;

/// Default bound on the estimated number of search nodes.
pub const DEFAULT_BUDGET: f64 = 2e7;

/// Dense integer `2n x 2n` matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::dim(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    fn from_columns(cols: &[Vec<i64>]) -> Self {
        let dim = cols.len();
        let mut entries = vec![0; dim * dim];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                entries[i * dim + j] = c[i];
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn norm_sq(&self) -> i128 {
        self.entries
            .iter()
            .map(|&v| (v as i128) * (v as i128))
            .sum()
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dim("integer matrix sizes differ"));
        }
        let d = self.dim;
        let mut entries = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc: i128 = 0;
                for k in 0..d {
                    acc += self.get(i, k) as i128 * other.get(k, j) as i128;
                }
                entries[i * d + j] = i64::try_from(acc)
                    .map_err(|_| Error::num("integer matrix product overflows"))?;
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Exact test of `g^T J g = J`.
    pub fn is_symplectic(&self) -> bool {
        if !self.dim.is_multiple_of(2) {
            return false;
        }
        let n = self.dim / 2;
        let col = |j: usize| -> Vec<i64> { (0..self.dim).map(|i| self.get(i, j)).collect() };
        let cols: Vec<Vec<i64>> = (0..self.dim).map(col).collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if omega(&cols[i], &cols[j], n) != j_entry(i, j, n) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as f64)
    }

    pub fn to_symplectic(&self) -> SymplecticMatrix {
        SymplecticMatrix::from_trusted(self.to_real())
    }

    /// Canonical order: Frobenius norm, then entries lexicographically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.norm_sq()
            .cmp(&other.norm_sq())
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

/// `omega(u, v) = u^T J v`.
fn omega(u: &[i64], v: &[i64], n: usize) -> i128 {
    (0..n)
        .map(|j| u[j] as i128 * v[j + n] as i128 - u[j + n] as i128 * v[j] as i128)
        .sum()
}

fn j_entry(i: usize, j: usize, n: usize) -> i128 {
    if i < n && j == i + n {
        1
    } else if i >= n && j + n == i {
        -1
    } else {
        0
    }
}

/// The principal congruence subgroup `Gamma_n(N) = {g in Sp(2n, Z) : g = I mod N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceGroup {
    n: usize,
    level: u64,
}

impl CongruenceGroup {
    pub fn new(n: usize, level: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("degree must be positive"));
        }
        if level == 0 {
            return Err(Error::domain("level must be positive"));
        }
        Ok(Self { n, level })
    }

    /// The full modular group `Sp(2n, Z)`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `|Gamma cap {+-I}|`.
    pub fn epsilon(&self) -> u32 {
        if self.level <= 2 {
            2
        } else {
            1
        }
    }

    fn congruent_to_identity(&self, g: &IntMatrix) -> bool {
        let level = self.level as i64;
        let d = g.dim();
        (0..d).all(|i| (0..d).all(|j| (g.get(i, j) - i64::from(i == j)).rem_euclid(level) == 0))
    }

    pub fn contains(&self, g: &IntMatrix) -> bool {
        g.dim() == 2 * self.n && g.is_symplectic() && self.congruent_to_identity(g)
    }

    /// `Gamma cap K`: the `k_u` with `u` a monomial matrix over `{+-1, +-i}`,
    /// further cut down by the congruence condition.
    pub fn k_intersection(&self) -> Vec<IntMatrix> {
        let n = self.n;
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut perms = Vec::new();
        permutations(&mut perm, 0, &mut perms);
        for p in &perms {
            for phases in 0..4usize.pow(n as u32) {
                // u[p[r], r] = i^{phase_r}
                let mut a = vec![0i64; n * n];
                let mut b = vec![0i64; n * n];
                let mut code = phases;
                for r in 0..n {
                    let (re, im) = [(1, 0), (0, 1), (-1, 0), (0, -1)][code % 4];
                    code /= 4;
                    a[p[r] * n + r] = re;
                    b[p[r] * n + r] = im;
                }
                let d = 2 * n;
                let mut entries = vec![0i64; d * d];
                for i in 0..n {
                    for j in 0..n {
                        entries[i * d + j] = a[i * n + j];
                        entries[i * d + j + n] = b[i * n + j];
                        entries[(i + n) * d + j] = -b[i * n + j];
                        entries[(i + n) * d + j + n] = a[i * n + j];
                    }
                }
                let g = IntMatrix { dim: d, entries };
                if self.congruent_to_identity(&g) {
                    out.push(g);
                }
            }
        }
        out.sort_by(|x, y| x.canonical_cmp(y));
        out
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

/// Elements of a congruence subgroup with Frobenius norm at most `radius`, in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationBall {
    group: CongruenceGroup,
    radius: f64,
    elements: Vec<IntMatrix>,
}

impl EnumerationBall {
    pub fn group(&self) -> CongruenceGroup {
        self.group
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The sub-ball of radius `radius <= self.radius`.
    pub fn restrict(&self, radius: f64) -> Self {
        let bound = norm_bound(radius);
        Self {
            group: self.group,
            radius: radius.min(self.radius),
            elements: self
                .elements
                .iter()
                .filter(|g| g.norm_sq() <= bound as i128)
                .cloned()
                .collect(),
        }
    }

    /// A ball holding exactly the given elements, validated for membership.
    pub fn from_elements(
        group: CongruenceGroup,
        radius: f64,
        mut elements: Vec<IntMatrix>,
    ) -> Result<Self> {
        let bound = norm_bound(radius);
        for g in &elements {
            if !group.contains(g) {
                return Err(Error::domain("element is not in the congruence subgroup"));
            }
            if g.norm_sq() > bound as i128 {
                return Err(Error::domain("element lies outside the ball"));
            }
        }
        elements.sort_by(|x, y| x.canonical_cmp(y));
        Ok(Self {
            group,
            radius,
            elements,
        })
    }
}

/// Largest integer `r2` with `r2 <= radius^2`, tolerant of rounding in `radius`.
fn norm_bound(radius: f64) -> i64 {
    (radius * radius * (1.0 + 1e-12) + 1e-9).floor() as i64
}

fn unit_ball_volume(dim: usize) -> f64 {
    let d = dim as f64;
    std::f64::consts::PI.powf(d / 2.0) / crate::special::gamma(d / 2.0 + 1.0)
}

/// Heuristic node count of the search at `radius`.
pub fn search_estimate(group: &CongruenceGroup, radius: f64) -> f64 {
    let d = 2 * group.n;
    let level = group.level as f64;
    unit_ball_volume(d)
        * (radius / level).powi(d as i32).max(1.0)
        * (2.0 * radius / level + 1.0).powi(d as i32 - 1)
}

fn feasible_radius(group: &CongruenceGroup, budget: f64) -> f64 {
    let mut lo = (2.0 * group.n as f64).sqrt();
    if search_estimate(group, lo) > budget {
        return lo;
    }
    let mut hi = lo * 2.0;
    while search_estimate(group, hi) <= budget {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if search_estimate(group, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// All `g in Gamma_n(N)` with `||g||_F <= radius`.
///
/// Degree one sweeps coprime bottom rows `(c, d)` and completes them to
/// `SL(2, Z)`. Higher degrees search columns in the order
/// `c_1, c_{n+1}, c_2, c_{n+2}, ...`, solving the linear conditions
/// `omega(c_i, c_new) = J_{i,new}` exactly and pruning on the partial norm.
pub fn enumerate_ball(
    group: &CongruenceGroup,
    radius: f64,
    budget: f64,
) -> Result<EnumerationBall> {
    let n = group.n;
    if !(radius >= (2.0 * n as f64).sqrt() * (1.0 - 1e-12)) {
        return Err(Error::domain(format!(
            "radius {radius} is below sqrt(2n) = {}",
            (2.0 * n as f64).sqrt()
        )));
    }
    let estimate = search_estimate(group, radius);
    if estimate > budget {
        return Err(Error::Budget {
            estimate,
            budget,
            feasible_radius: feasible_radius(group, budget),
        });
    }
    let bound = norm_bound(radius);
    let mut elements = if n == 1 {
        enumerate_degree_one(group.level as i64, bound)
    } else {
        enumerate_generic(n, group.level as i64, bound)?
    };
    elements.par_sort_by(|x, y| x.canonical_cmp(y));
    Ok(EnumerationBall {
        group: *group,
        radius,
        elements,
    })
}

fn isqrt(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn enumerate_degree_one(level: i64, bound: i64) -> Vec<IntMatrix> {
    let r = isqrt(bound);
    let congruent = |v: i64, target: i64| (v - target).rem_euclid(level) == 0;
    let rows: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|c| (-r..=r).map(move |d| (c, d)))
        .filter(|&(c, d)| c * c + d * d < bound && congruent(c, 0) && congruent(d, 1))
        .collect();
    rows.par_iter()
        .flat_map_iter(|&(c, d)| {
            let mut out = Vec::new();
            let (g, x, y) = ext_gcd(d, -c);
            if g != 1 {
                return out.into_iter();
            }
            // a d - b c = 1 with a = x, b = y; general solution (a + k c, b + k d)
            let (a0, b0) = (x, y);
            let cd = c * c + d * d;
            let rem = bound - cd;
            let center = -((a0 * c + b0 * d) as f64) / cd as f64;
            let k0 = center.round() as i64;
            let fits = |k: i64| {
                let a = a0 + k * c;
                let b = b0 + k * d;
                a * a + b * b <= rem
            };
            let mut k = k0;
            while fits(k) {
                k -= 1;
            }
            k += 1;
            while fits(k) {
                let a = a0 + k * c;
                let b = b0 + k * d;
                if congruent(a, 1) && congruent(b, 0) {
                    out.push(IntMatrix {
                        dim: 2,
                        entries: vec![a, b, c, d],
                    });
                }
                k += 1;
            }
            out.into_iter()
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced echelon form of `A v = b` over the integers.
struct LinearSystem {
    /// `(pivot column, row coefficients, right-hand side)`.
    pivots: Vec<(usize, Vec<i128>, i128)>,
    free: Vec<usize>,
}

fn eliminate(mut rows: Vec<(Vec<i128>, i128)>, dim: usize) -> Option<LinearSystem> {
    let mut pivots = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for col in 0..dim {
        let Some(p) = (next..rows.len())
            .filter(|&i| rows[i].0[col] != 0)
            .min_by_key(|&i| rows[i].0[col].abs())
        else {
            continue;
        };
        rows.swap(next, p);
        let (prow, pb) = rows[next].clone();
        let pv = prow[col];
        for i in 0..rows.len() {
            if i == next || rows[i].0[col] == 0 {
                continue;
            }
            let f = rows[i].0[col];
            let (row, b) = &mut rows[i];
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = *x * pv - f * y;
            }
            *b = *b * pv - f * pb;
            let g = row.iter().fold(b.abs(), |g, &x| gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
                *b /= g;
            }
        }
        pivot_cols.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    for (row, b) in &rows[next..] {
        if row.iter().all(|&x| x == 0) && *b != 0 {
            return None;
        }
    }
    for (k, &col) in pivot_cols.iter().enumerate() {
        let (row, b) = &rows[k];
        pivots.push((col, row.clone(), *b));
    }
    let free = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    Some(LinearSystem { pivots, free })
}

struct ColumnSearch {
    n: usize,
    level: i64,
    bound: i64,
    order: Vec<usize>,
}

impl ColumnSearch {
    fn target(&self, idx: usize, i: usize) -> i64 {
        i64::from(i == idx)
    }

    fn congruent(&self, v: i64, target: i64) -> bool {
        (v - target).rem_euclid(self.level) == 0
    }

    /// Integer values `v = target (mod N)` with `|v| <= limit`.
    fn residue_range(&self, target: i64, limit: i64) -> impl Iterator<Item = i64> {
        let level = self.level;
        let start = target + (-limit - target).div_euclid(level) * level;
        let start = if start < -limit { start + level } else { start };
        (0..)
            .map(move |k| start + k * level)
            .take_while(move |&v| v <= limit)
    }

    fn first_columns(&self) -> Vec<Vec<i64>> {
        let d = 2 * self.n;
        let mut out = Vec::new();
        let mut v = vec![0i64; d];
        // remaining columns need norm at least one each
        let budget = self.bound - (d as i64 - 1);
        self.free_fill(
            0,
            self.order[0],
            &(0..d).collect::<Vec<_>>(),
            &mut v,
            budget,
            &mut |v| {
                let g = v.iter().fold(0i128, |g, &x| gcd(g, x as i128));
                if g == 1 {
                    out.push(v.to_vec());
                }
            },
        );
        out
    }

    fn free_fill(
        &self,
        pos: usize,
        idx: usize,
        free: &[usize],
        v: &mut [i64],
        budget: i64,
        emit: &mut dyn FnMut(&[i64]),
    ) {
        if pos == free.len() {
            emit(v);
            return;
        }
        let c = free[pos];
        let limit = isqrt(budget);
        let vals: Vec<i64> = self.residue_range(self.target(idx, c), limit).collect();
        for x in vals {
            let rest = budget - x * x;
            if rest < 0 {
                continue;
            }
            v[c] = x;
            self.free_fill(pos + 1, idx, free, v, rest, emit);
        }
        v[c] = 0;
    }

    fn extend(&self, cols: &mut Vec<Vec<i64>>, used: i64, out: &mut Vec<IntMatrix>) {
        let d = 2 * self.n;
        let step = cols.len();
        if step == d {
            let mut ordered = vec![Vec::new(); d];
            for (k, &idx) in self.order.iter().enumerate() {
                ordered[idx] = cols[k].clone();
            }
            out.push(IntMatrix::from_columns(&ordered));
            return;
        }
        let idx = self.order[step];
        let rows: Vec<(Vec<i128>, i128)> = (0..step)
            .map(|k| {
                let prev = self.order[k];
                let u = &cols[k];
                let mut coeff = vec![0i128; d];
                for j in 0..self.n {
                    coeff[j + self.n] += u[j] as i128;
                    coeff[j] -= u[j + self.n] as i128;
                }
                (coeff, j_entry(prev, idx, self.n))
            })
            .collect();
        let Some(system) = eliminate(rows, d) else {
            return;
        };
        let remaining_after = (d - step - 1) as i64;
        let budget = self.bound - used - remaining_after;
        if budget < 1 {
            return;
        }
        let mut v = vec![0i64; d];
        let mut found: Vec<Vec<i64>> = Vec::new();
        self.free_fill(0, idx, &system.free, &mut v, budget, &mut |v| {
            let mut w = v.to_vec();
            let mut norm: i64 = system.free.iter().map(|&c| v[c] * v[c]).sum();
            for (col, row, b) in &system.pivots {
                let s: i128 = system.free.iter().map(|&c| row[c] * v[c] as i128).sum();
                let num = b - s;
                let den = row[*col];
                if num % den != 0 {
                    return;
                }
                let x = num / den;
                if x.abs() > budget as i128 {
                    return;
                }
                let x = x as i64;
                if !self.congruent(x, self.target(idx, *col)) {
                    return;
                }
                norm += x * x;
                if norm > budget {
                    return;
                }
                w[*col] = x;
            }
            found.push(w);
        });
        for w in found {
            let norm: i64 = w.iter().map(|x| x * x).sum();
            cols.push(w);
            self.extend(cols, used + norm, out);
            cols.pop();
        }
    }
}

fn enumerate_generic(n: usize, level: i64, bound: i64) -> Result<Vec<IntMatrix>> {
    let mut order = Vec::with_capacity(2 * n);
    for r in 0..n {
        order.push(r);
        order.push(r + n);
    }
    let search = ColumnSearch {
        n,
        level,
        bound,
        order,
    };
    let firsts = search.first_columns();
    Ok(firsts
        .par_iter()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            let norm: i64 = c.iter().map(|x| x * x).sum();
            let mut cols = vec![c.clone()];
            search.extend(&mut cols, norm, &mut out);
            out.into_iter()
        })
        .collect())
}

/// File name used for a cached ball.
pub fn cache_path(dir: &Path, group: &CongruenceGroup, radius: f64) -> PathBuf {
    dir.join(format!(
        "ball_n{}_N{}_r{:016x}.bin",
        group.n,
        group.level,
        radius.to_bits()
    ))
}

/// Writes `n, N, radius bits, count` as little-endian `u64` followed by the
/// entries of every matrix as little-endian `i64`, row-major.
pub fn write_cache(path: &Path, ball: &EnumerationBall) -> Result<()> {
    let mut buf =
        Vec::with_capacity(32 + ball.elements.len() * 8 * 4 * ball.group.n * ball.group.n);
    buf.extend_from_slice(&(ball.group.n as u64).to_le_bytes());
    buf.extend_from_slice(&ball.group.level.to_le_bytes());
    buf.extend_from_slice(&ball.radius.to_bits().to_le_bytes());
    buf.extend_from_slice(&(ball.elements.len() as u64).to_le_bytes());
    for g in &ball.elements {
        for v in &g.entries {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp)?;
    file.write_all(&buf)?;
    file.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<EnumerationBall> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 32 {
        return Err(Error::Parse("ball cache header is truncated".into()));
    }
    let word = |k: usize| u64::from_le_bytes(buf[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    let n = word(0) as usize;
    let level = word(1);
    let radius = f64::from_bits(word(2));
    let count = word(3) as usize;
    let group = CongruenceGroup::new(n, level)?;
    let per = 4 * n * n;
    let expected = 32 + count * per * 8;
    if buf.len() != expected {
        return Err(Error::Parse(format!(
            "ball cache has {} bytes, expected {expected}",
            buf.len()
        )));
    }
    let elements = (0..count)
        .map(|k| {
            let start = 32 + k * per * 8;
            let entries = (0..per)
                .map(|e| {
                    let o = start + 8 * e;
                    i64::from_le_bytes(buf[o..o + 8].try_into().expect("8 bytes"))
                })
                .collect();
            IntMatrix {
                dim: 2 * n,
                entries,
            }
        })
        .collect();
    Ok(EnumerationBall {
        group,
        radius,
        elements,
    })
}

/// [`enumerate_ball`] backed by an optional cache directory.
pub fn enumerate_ball_cached(
    group: &CongruenceGroup,
    radius: f64,
    budget: f64,
    cache_dir: Option<&Path>,
) -> Result<EnumerationBall> {
    let Some(dir) = cache_dir else {
        return enumerate_ball(group, radius, budget);
    };
    let path = cache_path(dir, group, radius);
    if path.exists() {
        if let Ok(ball) = read_cache(&path) {
            if ball.group == *group && ball.radius == radius {
                return Ok(ball);
            }
        }
    }
    let ball = enumerate_ball(group, radius, budget)?;
    fs::create_dir_all(dir)?;
    write_cache(&path, &ball)?;
    Ok(ball)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute_force_degree_one(level: i64, radius: f64) -> HashSet<IntMatrix> {
        let bound = norm_bound(radius);
        let r = isqrt(bound);
        let group = CongruenceGroup::new(1, level as u64).unwrap();
        let mut out = HashSet::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        if a * a + b * b + c * c + d * d > bound {
                            continue;
                        }
                        let g = IntMatrix::new(2, vec![a, b, c, d]).unwrap();
                        if group.contains(&g) {
                            out.insert(g);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn smallest_balls() {
        let full = CongruenceGroup::full(1).unwrap();
        let ball = enumerate_ball(&full, 2f64.sqrt(), DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.len(), 4);
        let three = CongruenceGroup::new(1, 3).unwrap();
        let ball = enumerate_ball(&three, 2f64.sqrt(), DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.elements(), &[IntMatrix::identity(2)]);
        assert!(matches!(
            enumerate_ball(&full, 1.0, DEFAULT_BUDGET),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degree_one_matches_brute_force() {
        for level in 1..=3 {
            for &radius in &[1.5, 3.0, 4.5, 6.0] {
                let group = CongruenceGroup::new(1, level as u64).unwrap();
                let ball = enumerate_ball(&group, radius, DEFAULT_BUDGET).unwrap();
                let got: HashSet<IntMatrix> = ball.elements().iter().cloned().collect();
                assert_eq!(got.len(), ball.len());
                assert_eq!(
                    got,
                    brute_force_degree_one(level, radius),
                    "N = {level}, R = {radius}"
                );
            }
        }
    }

    #[test]
    fn generic_search_agrees_in_degree_one() {
        for level in 1..=3 {
            let bound = norm_bound(5.0);
            let mut a = enumerate_degree_one(level, bound);
            let mut b = enumerate_generic(1, level, bound).unwrap();
            a.sort_by(|x, y| x.canonical_cmp(y));
            b.sort_by(|x, y| x.canonical_cmp(y));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn degree_two_elements_are_valid_and_closed() {
        for level in 1..=3u64 {
            let group = CongruenceGroup::new(2, level).unwrap();
            let ball = enumerate_ball(&group, 3.0, DEFAULT_BUDGET).unwrap();
            let set: HashSet<IntMatrix> = ball.elements().iter().cloned().collect();
            assert!(set.contains(&IntMatrix::identity(4)));
            for g in ball.elements() {
                assert!(group.contains(g));
                assert!(g.norm_sq() <= 9);
                for k in group.k_intersection() {
                    assert!(set.contains(&k.mul(g).unwrap()));
                }
            }
        }
    }

    #[test]
    fn degree_two_small_ball_by_brute_force() {
        // every element of norm^2 <= 6 has entries in {-1, 0, 1}
        let group = CongruenceGroup::full(2).unwrap();
        let ball = enumerate_ball(&group, 6f64.sqrt(), DEFAULT_BUDGET).unwrap();
        let mut count = 0;
        for code in 0..3u64.pow(16) {
            let mut c = code;
            let entries: Vec<i64> = (0..16)
                .map(|_| {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    v
                })
                .collect();
            if entries.iter().map(|x| x * x).sum::<i64>() > 6 {
                continue;
            }
            let g = IntMatrix::new(4, entries).unwrap();
            if group.contains(&g) {
                count += 1;
                assert!(ball.elements().contains(&g));
            }
        }
        assert_eq!(count, ball.len());
    }

    #[test]
    fn k_intersection_sizes() {
        assert_eq!(CongruenceGroup::full(1).unwrap().k_intersection().len(), 4);
        assert_eq!(CongruenceGroup::full(2).unwrap().k_intersection().len(), 32);
        assert_eq!(
            CongruenceGroup::new(2, 2).unwrap().k_intersection().len(),
            4
        );
        assert_eq!(
            CongruenceGroup::new(2, 3).unwrap().k_intersection().len(),
            1
        );
        for g in CongruenceGroup::full(3).unwrap().k_intersection() {
            assert!(g.is_symplectic());
        }
    }

    #[test]
    fn budget_error_reports_feasible_radius() {
        let group = CongruenceGroup::full(2).unwrap();
        match enumerate_ball(&group, 50.0, 1e6) {
            Err(Error::Budget {
                feasible_radius, ..
            }) => {
                assert!(search_estimate(&group, feasible_radius) <= 1e6);
                assert!(feasible_radius < 50.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let group = CongruenceGroup::new(1, 2).unwrap();
        let ball = enumerate_ball_cached(&group, 8.0, DEFAULT_BUDGET, Some(dir.path())).unwrap();
        let path = cache_path(dir.path(), &group, 8.0);
        let bytes = fs::read(&path).unwrap();
        assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 2);
        assert_eq!(bytes.len(), 32 + ball.len() * 32);
        let again = read_cache(&path).unwrap();
        assert_eq!(again, ball);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20i64 {
            for b in -20..20i64 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
            }
        }
    }
}
