//! Exterior-algebra bookkeeping on bitmask-encoded basis monomials.
//!
//! A mask with bits `s_0 < s_1 < …` stands for `e^{s_0} ∧ e^{s_1} ∧ …`.

pub fn bits(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

pub fn mask_of(idx: &[usize]) -> u32 {
    idx.iter().fold(0u32, |m, &i| m | (1 << i))
}

/// `e^a ∧ e^b` as `(mask, negative?)`; `None` when the factors overlap.
pub fn wedge(a: u32, b: u32) -> Option<(u32, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut parity = 0u32;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        parity += (a >> (j + 1)).count_ones();
        m &= m - 1;
    }
    Some((a | b, parity % 2 == 1))
}

/// All `p`-element masks of `{0..n}` in lexicographic order of index tuples.
pub fn subsets(n: usize, p: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
        if cur.len() == p {
            out.push(mask_of(cur));
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}

/// Sorts `idx`, returning the mask and whether the permutation was odd;
/// `None` on a repeated index.
pub fn sort_sign(idx: &[usize]) -> Option<(u32, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((mask_of(&v), odd))
}

/// Contraction of `e^mask` with the basis vector `e_v`: `(mask \ v, negative?)`.
pub fn contract(v: usize, mask: u32) -> Option<(u32, bool)> {
    if mask & (1 << v) == 0 {
        return None;
    }
    let pos = (mask & ((1u32 << v) - 1)).count_ones();
    Some((mask & !(1 << v), pos % 2 == 1))
}
