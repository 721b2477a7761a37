//! Index arithmetic shared by the constructions.

/// `C(n, k)` in `u128`; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// All `k`-subsets of `0..n` as ascending tuples, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The residue `<a>_q` with multiples of `q` mapped to `q` (1-based).
pub fn residue(a: usize, q: usize) -> usize {
    match a % q {
        0 => q,
        r => r,
    }
}

/// Iterates all vectors in `0..radix` of the given length, lexicographically
/// with the first coordinate most significant.
pub fn for_each_tuple(len: usize, radix: usize, mut f: impl FnMut(&[usize])) {
    if radix == 0 && len > 0 {
        return;
    }
    let mut cur = vec![0usize; len];
    loop {
        f(&cur);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radix {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(5, 0), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(54, 12), Some(343_006_888_770));
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(5, 3).len(), 10);
    }

    #[test]
    fn residue_convention() {
        assert_eq!(residue(4, 4), 4);
        assert_eq!(residue(5, 4), 1);
        assert_eq!(residue(3, 2), 1);
    }

    #[test]
    fn tuples_in_order() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut n = 0;
        for_each_tuple(0, 3, |_| n += 1);
        assert_eq!(n, 1);
    }
}
