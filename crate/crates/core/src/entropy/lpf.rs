//! Longest-previous-factor computation over integer code sequences.
//!
//! For each position `i`, `lpf[i]` is the length of the longest prefix of the
//! suffix starting at `i` that also occurs starting at some earlier position
//! `j < i`. The earlier occurrence may overlap `i` (it only has to *start*
//! before it), and it must fit inside the sequence.
//!
//! The fast path builds a suffix array by prefix doubling with counting sort
//! (O(n log n)), derives the LCP array with Kasai's algorithm, and then
//! resolves `lpf` by deleting positions from a doubly linked list over suffix
//! ranks, largest position first. At the moment position `i` is processed,
//! its list neighbours are exactly the lexicographically nearest suffixes
//! starting before `i`, and the nearest neighbours maximise the LCP.
//!
//! [`lpf_naive`] recomputes the same quantity by direct scanning and is kept
//! as an independent oracle.

/// Suffix array by prefix doubling with counting sort.
fn suffix_array(s: &[usize]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }

    // rank[i] is the equivalence class of suffix i under its first k symbols.
    let mut rank: Vec<usize> = s.to_vec();
    let mut classes = rank.iter().max().copied().unwrap_or(0) + 1;
    let mut sa: Vec<usize> = (0..n).collect();
    let mut cnt = vec![0usize; classes.max(n + 1)];

    // Initial sort by single symbol.
    for &r in &rank {
        cnt[r] += 1;
    }
    for i in 1..classes {
        cnt[i] += cnt[i - 1];
    }
    for i in (0..n).rev() {
        cnt[rank[i]] -= 1;
        sa[cnt[rank[i]]] = i;
    }

    let mut next_rank = vec![0usize; n];
    let mut by_second = vec![0usize; n];
    let mut k = 1;
    while classes < n && k < n {
        // Order by the second key rank[i + k]: suffixes whose second half is
        // empty sort first, then the rest inherit the order of suffix i + k.
        let mut p = 0;
        for i in n - k..n {
            by_second[p] = i;
            p += 1;
        }
        for &j in &sa {
            if j >= k {
                by_second[p] = j - k;
                p += 1;
            }
        }

        // Stable counting sort by the first key.
        cnt[..classes].fill(0);
        for &i in &by_second {
            cnt[rank[i]] += 1;
        }
        for c in 1..classes {
            cnt[c] += cnt[c - 1];
        }
        for &i in by_second.iter().rev() {
            cnt[rank[i]] -= 1;
            sa[cnt[rank[i]]] = i;
        }

        // Re-number classes under the doubled key.
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        next_rank[sa[0]] = 0;
        classes = 1;
        for w in 1..n {
            if key(sa[w]) != key(sa[w - 1]) {
                classes += 1;
            }
            next_rank[sa[w]] = classes - 1;
        }
        rank.copy_from_slice(&next_rank);
        k <<= 1;
    }
    sa
}

/// Kasai's LCP array: `lcp[r]` is the longest common prefix of the suffixes
/// at ranks `r - 1` and `r`; `lcp[0] = 0`.
fn lcp_array(s: &[usize], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Longest previous factor for every position, via suffix array.
pub fn lpf(s: &[usize]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let sa = suffix_array(s);
    let lcp = lcp_array(s, &sa);
    let mut rank = vec![0usize; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }

    // Doubly linked list over ranks; lcp_prev[r] is the LCP between rank r
    // and its current predecessor in the list.
    let sentinel = usize::MAX;
    let mut prev: Vec<usize> = (0..n)
        .map(|r| if r == 0 { sentinel } else { r - 1 })
        .collect();
    let mut next: Vec<usize> = (0..n)
        .map(|r| if r + 1 < n { r + 1 } else { sentinel })
        .collect();
    let mut lcp_prev = lcp;

    let mut out = vec![0usize; n];
    for i in (0..n).rev() {
        let r = rank[i];
        let p = prev[r];
        let nx = next[r];
        let left = if p != sentinel { lcp_prev[r] } else { 0 };
        let right = if nx != sentinel { lcp_prev[nx] } else { 0 };
        out[i] = left.max(right);
        // Unlink r; the LCP across the gap is the min of the two sides.
        if p != sentinel {
            next[p] = nx;
        }
        if nx != sentinel {
            prev[nx] = p;
            lcp_prev[nx] = if p != sentinel { left.min(right) } else { 0 };
        }
    }
    out
}

/// Longest previous factor by direct scanning; quadratic, the test oracle.
pub fn lpf_naive(s: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut out = vec![0usize; n];
    for i in 0..n {
        let mut best = 0;
        for j in 0..i {
            let mut m = 0;
            while i + m < n && j + m < n && s[i + m] == s[j + m] {
                m += 1;
            }
            best = best.max(m);
        }
        out[i] = best;
    }
    out
}
