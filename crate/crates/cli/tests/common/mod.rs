//! Helpers shared by the CLI test targets: running the binary and
//! brute-force oracles over prime fields written independently of the
//! library's enumeration code.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use tempfile::TempDir;

use lincommon::linsys::LinearSystem;

pub fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

pub fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lincommon"));
    cmd.args(args).env_remove("LINCOMMON_BUDGET");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// A temporary directory for input files.
pub struct Scratch(TempDir);

impl Scratch {
    pub fn new() -> Self {
        Scratch(tempfile::tempdir().expect("temp dir"))
    }

    pub fn file(&self, name: &str, contents: &str) -> String {
        let path: PathBuf = self.0.path().join(name);
        std::fs::write(&path, contents).expect("write");
        path.to_string_lossy().into_owned()
    }

    pub fn catalog(&self, name: &str) -> String {
        self.file(
            &format!("{name}.sys"),
            lincommon::catalog::entry(name).unwrap().text,
        )
    }
}

pub fn rows_of(l: &LinearSystem) -> Vec<Vec<i64>> {
    l.row_codes()
        .iter()
        .map(|r| r.iter().map(|&c| c as i64).collect())
        .collect()
}

pub fn md(a: i64, q: i64) -> i64 {
    a.rem_euclid(q)
}

pub fn inv_mod(a: i64, q: i64) -> i64 {
    (1..q).find(|&b| md(a * b, q) == 1).expect("invertible")
}

/// Rank over F_q (q prime) by Gaussian elimination.
pub fn rank(q: i64, mut rows: Vec<Vec<i64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| md(rows[i][c], q) != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][c], q);
        for x in rows[r].iter_mut() {
            *x = md(*x * inv, q);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && md(row[c], q) != 0 {
                let f = row[c];
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = md(*x - f * p, q);
                }
            }
        }
        r += 1;
    }
    r
}

/// Every combination Σ λ_i row_i with λ ≠ 0.
pub fn row_space(q: i64, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = rows[0].len();
    let m = rows.len() as u32;
    (1..q.pow(m))
        .map(|mut code| {
            let mut v = vec![0; k];
            for row in rows {
                let lambda = code % q;
                code /= q;
                for (x, r) in v.iter_mut().zip(row) {
                    *x = md(*x + lambda * r, q);
                }
            }
            v
        })
        .collect()
}

pub fn weight(v: &[i64]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

fn digits(mut code: u64, q: i64, len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for c in (0..len).rev() {
        out[c] = (code % q as u64) as i64;
        code /= q as u64;
    }
    out
}

fn satisfies(q: i64, rows: &[Vec<i64>], x: &[i64]) -> bool {
    rows.iter()
        .all(|r| md(r.iter().zip(x).map(|(a, b)| a * b).sum::<i64>(), q) == 0)
}

/// All x ∈ F_q^k with every row vanishing, by scanning F_q^k.
pub fn base_solutions(q: i64, rows: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    (0..(q as u64).pow(k as u32))
        .map(|code| digits(code, q, k))
        .filter(|x| satisfies(q, rows, x))
        .collect()
}

/// Solutions over F_q^d as k-tuples of table indices (first coordinate
/// most significant): coordinate c of every x_i comes from the c-th of d
/// base solutions.
pub fn solution_indices(q: i64, base: &[Vec<i64>], d: usize) -> Vec<Vec<usize>> {
    let k = base.first().map_or(0, Vec::len);
    let b = base.len();
    let total = b.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let mut picks = vec![0; d];
            for c in (0..d).rev() {
                picks[c] = code % b;
                code /= b;
            }
            (0..k)
                .map(|i| {
                    picks
                        .iter()
                        .fold(0usize, |acc, &p| acc * q as usize + base[p][i] as usize)
                })
                .collect()
        })
        .collect()
}

/// Calls `visit` with the table indices of every solution over F_q^d,
/// without allocating per solution.
pub fn for_each_solution(q: i64, base: &[Vec<i64>], d: usize, mut visit: impl FnMut(&[usize])) {
    let Some(k) = base.first().map(Vec::len) else {
        return;
    };
    let mut picks = vec![0usize; d];
    let mut idx = vec![0usize; k];
    loop {
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = picks
                .iter()
                .fold(0usize, |acc, &p| acc * q as usize + base[p][i] as usize);
        }
        visit(&idx);
        let mut c = d;
        loop {
            if c == 0 {
                return;
            }
            c -= 1;
            picks[c] += 1;
            if picks[c] < base.len() {
                break;
            }
            picks[c] = 0;
        }
    }
}

/// Critical sets computed from the row space: (B, m_B) for every B with
/// |B| = c(L) supporting a nonzero row-space vector.
pub fn critical_sets(q: i64, rows: &[Vec<i64>]) -> (usize, usize, Vec<(Vec<usize>, usize)>) {
    let k = rows[0].len();
    let space = row_space(q, rows);
    let s = space.iter().map(|v| weight(v)).min().expect("nonzero rows");
    let c = s + s % 2;
    let mut out = Vec::new();
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize != c {
            continue;
        }
        let inside = space
            .iter()
            .filter(|v| {
                v.iter()
                    .enumerate()
                    .all(|(i, &x)| x == 0 || mask & (1 << i) != 0)
            })
            .count();
        if inside > 0 {
            // inside = q^{m_B} − 1
            let m_b = (1..)
                .find(|&e| q.pow(e) - 1 == inside as i64)
                .expect("subspace size") as usize;
            out.push(((0..k).filter(|&i| mask & (1 << i) != 0).collect(), m_b));
        }
    }
    (s, c, out)
}

/// Values at every index of F_q^d: the number of zero coordinates.
pub fn zero_counts(q: i64, d: usize) -> Vec<usize> {
    (0..(q as u64).pow(d as u32))
        .map(|i| digits(i, q, d).iter().filter(|&&x| x == 0).count())
        .collect()
}

/// Coordinates of every index of F_q^n.
pub fn all_vectors(q: i64, n: usize) -> Vec<Vec<i64>> {
    (0..(q as u64).pow(n as u32))
        .map(|i| digits(i, q, n))
        .collect()
}

/// |sol(L; F_q^n)| by testing every k-tuple of vectors in F_q^n.
pub fn brute_force_count(q: i64, rows: &[Vec<i64>], k: usize, n: usize) -> u64 {
    let size = (q as usize).pow(n as u32);
    let vectors: Vec<Vec<i64>> = (0..size).map(|i| digits(i as u64, q, n)).collect();
    let mut tuple = vec![0usize; k];
    let mut count = 0;
    loop {
        let ok = rows.iter().all(|r| {
            (0..n).all(|c| {
                md(
                    r.iter()
                        .zip(&tuple)
                        .map(|(a, &t)| a * vectors[t][c])
                        .sum::<i64>(),
                    q,
                ) == 0
            })
        });
        if ok {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == k {
                return count;
            }
            tuple[i] += 1;
            if tuple[i] < size {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

pub fn ratio(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat(s: &str) -> BigRational {
    lincommon::rational::parse(s).expect("rational")
}

/// Δ(g) = E Π(1/2 + g(x_i)) + E Π(1/2 − g(x_i)) over the given solutions.
pub fn exact_delta(sols: &[Vec<usize>], g: &[BigRational]) -> BigRational {
    let half = ratio(1, 2);
    let plus: Vec<BigRational> = g.iter().map(|v| &half + v).collect();
    let minus: Vec<BigRational> = g.iter().map(|v| &half - v).collect();
    let mut s = BigRational::zero();
    for t in sols {
        let a = t.iter().fold(BigRational::one(), |acc, &i| acc * &plus[i]);
        let b = t.iter().fold(BigRational::one(), |acc, &i| acc * &minus[i]);
        s += a + b;
    }
    s / BigRational::from_integer(BigInt::from(sols.len()))
}

/// f ↦ 2^{1−k}.
pub fn benchmark(k: usize) -> BigRational {
    ratio(2, 1i128 << k)
}
