//! Dense linear algebra over `F_p` for finite-dimensional shadows.

pub type Vector = Vec<u32>;

pub fn inv(p: u32, a: u32) -> u32 {
    let (p64, mut r, mut base, mut e) = (p as u64, 1u64, a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    r as u32
}

pub fn add(p: u32, x: &[u32], y: &[u32]) -> Vector {
    x.iter().zip(y).map(|(a, b)| (a + b) % p).collect()
}

pub fn sub(p: u32, x: &[u32], y: &[u32]) -> Vector {
    x.iter().zip(y).map(|(a, b)| (a + p - b) % p).collect()
}

pub fn scale(p: u32, c: u32, x: &[u32]) -> Vector {
    x.iter().map(|a| (*a as u64 * c as u64 % p as u64) as u32).collect()
}

/// `y += c·x`.
pub fn axpy(p: u32, c: u32, x: &[u32], y: &mut [u32]) {
    if c == 0 {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = ((*yi as u64 + c as u64 * *xi as u64) % p as u64) as u32;
    }
}

/// Reduced row echelon form of a row-major matrix; returns the pivot columns.
pub fn rref(p: u32, m: &mut [Vector]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, k);
        let s = inv(p, m[r][c]);
        m[r] = scale(p, s, &m[r]);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = p - m[i][c];
                let row = m[r].clone();
                axpy(p, f, &row, &mut m[i]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Rank of a set of vectors.
pub fn rank(p: u32, vectors: &[Vector]) -> usize {
    let mut m = vectors.to_vec();
    rref(p, &mut m).len()
}

/// Basis of `{x : Σ x_i·cols[i] = 0}` for the given column vectors.
pub fn kernel(p: u32, cols: &[Vector], len: usize) -> Vec<Vector> {
    let n = cols.len();
    let mut m: Vec<Vector> = (0..len).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
    let pivots = rref(p, &mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0; n];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - m[r][f]) % p;
            }
            x
        })
        .collect()
}

/// Coordinates of `b` in the span of `cols`, when it lies there.
pub fn solve(p: u32, cols: &[Vector], b: &[u32]) -> Option<Vector> {
    let n = cols.len();
    let len = b.len();
    let mut m: Vec<Vector> = (0..len)
        .map(|r| {
            let mut row: Vector = (0..n).map(|c| cols[c][r]).collect();
            row.push(b[r]);
            row
        })
        .collect();
    let pivots = rref(p, &mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0; n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let p = 3;
        let cols = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]];
        let k = kernel(p, &cols, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(rank(p, &cols), 2);
        let x = solve(p, &cols[..2], &[2, 1, 0]).unwrap();
        assert_eq!(x, vec![2, 1]);
        assert!(solve(p, &cols[..2], &[1, 0, 0]).is_none());
        assert_eq!(inv(7, 3), 5);
    }
}
