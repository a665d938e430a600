//! Log-space dynamic programs over a linear chain.

/// Node log-potentials for one sentence plus the shared transition matrix.
///
/// `node[t * k + y]` scores label `y` at position `t`; `trans[i * k + j]`
/// scores the bigram `i -> j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    len: usize,
    labels: usize,
    node: Vec<f64>,
    trans: Vec<f64>,
}

impl Lattice {
    pub fn new(len: usize, labels: usize, node: Vec<f64>, trans: Vec<f64>) -> Self {
        assert_eq!(node.len(), len * labels, "node matrix must be len x labels");
        assert_eq!(trans.len(), labels * labels, "transition matrix must be labels x labels");
        Lattice { len, labels, node, trans }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn labels(&self) -> usize {
        self.labels
    }

    #[inline]
    pub fn node(&self, t: usize, y: usize) -> f64 {
        self.node[t * self.labels + y]
    }

    #[inline]
    pub fn trans(&self, from: usize, to: usize) -> f64 {
        self.trans[from * self.labels + to]
    }

    /// Unnormalized log-score of a label path, summed left to right in the
    /// same order as Viterbi so that the two agree bit for bit.
    pub fn path_score(&self, path: &[usize]) -> f64 {
        assert_eq!(path.len(), self.len);
        let Some(&first) = path.first() else { return 0.0 };
        let mut s = self.node(0, first);
        for t in 1..path.len() {
            s = s + self.trans(path[t - 1], path[t]) + self.node(t, path[t]);
        }
        s
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn forward(lat: &Lattice) -> Vec<f64> {
    let k = lat.labels;
    let mut alpha = vec![0.0; lat.len * k];
    if lat.len == 0 {
        return alpha;
    }
    alpha[..k].copy_from_slice(&lat.node[..k]);
    let mut buf = vec![0.0; k];
    for t in 1..lat.len {
        let (prev, cur) = alpha.split_at_mut(t * k);
        let prev = &prev[(t - 1) * k..];
        for (j, out) in cur[..k].iter_mut().enumerate() {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = prev[i] + lat.trans(i, j);
            }
            *out = log_sum_exp(&buf) + lat.node(t, j);
        }
    }
    alpha
}

fn backward(lat: &Lattice) -> Vec<f64> {
    let k = lat.labels;
    let mut beta = vec![0.0; lat.len * k];
    let mut buf = vec![0.0; k];
    for t in (0..lat.len.saturating_sub(1)).rev() {
        let (cur, next) = beta.split_at_mut((t + 1) * k);
        let cur = &mut cur[t * k..];
        let next = &next[..k];
        for (i, out) in cur[..k].iter_mut().enumerate() {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = lat.trans(i, j) + lat.node(t + 1, j) + next[j];
            }
            *out = log_sum_exp(&buf);
        }
    }
    beta
}

/// Log of the sum of `exp(path_score)` over every label path.
pub fn log_partition(lat: &Lattice) -> f64 {
    if lat.len == 0 {
        return 0.0;
    }
    let alpha = forward(lat);
    log_sum_exp(&alpha[(lat.len - 1) * lat.labels..])
}

/// Forward and backward tables with the log partition they share.
#[derive(Clone, Debug)]
pub struct ForwardBackward {
    labels: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    pub log_z: f64,
}

impl ForwardBackward {
    pub fn new(lat: &Lattice) -> Self {
        let alpha = forward(lat);
        let beta = backward(lat);
        let log_z = if lat.len == 0 { 0.0 } else { log_sum_exp(&alpha[(lat.len - 1) * lat.labels..]) };
        ForwardBackward { labels: lat.labels, alpha, beta, log_z }
    }

    /// P(y_t = y).
    pub fn node_marginal(&self, t: usize, y: usize) -> f64 {
        let i = t * self.labels + y;
        (self.alpha[i] + self.beta[i] - self.log_z).exp()
    }

    /// P(y_{t-1} = from, y_t = to), for `t >= 1`.
    pub fn edge_marginal(&self, lat: &Lattice, t: usize, from: usize, to: usize) -> f64 {
        let k = self.labels;
        (self.alpha[(t - 1) * k + from] + lat.trans(from, to) + lat.node(t, to) + self.beta[t * k + to] - self.log_z)
            .exp()
    }
}

/// Highest-scoring path and its score. Ties go to the lowest label index,
/// both at every backpointer and at the final position.
pub fn viterbi_path(lat: &Lattice) -> (Vec<usize>, f64) {
    let k = lat.labels;
    let n = lat.len;
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut score = lat.node[..k].to_vec();
    let mut next = vec![0.0; k];
    let mut back = vec![0usize; n * k];
    for t in 1..n {
        for j in 0..k {
            let mut best = 0;
            let mut best_score = score[0] + lat.trans(0, j);
            for (i, &s) in score.iter().enumerate().skip(1) {
                let cand = s + lat.trans(i, j);
                if cand > best_score {
                    best = i;
                    best_score = cand;
                }
            }
            back[t * k + j] = best;
            next[j] = best_score + lat.node(t, j);
        }
        std::mem::swap(&mut score, &mut next);
    }
    let mut last = 0;
    for y in 1..k {
        if score[y] > score[last] {
            last = y;
        }
    }
    let total = score[last];
    let mut path = vec![0; n];
    path[n - 1] = last;
    for t in (1..n).rev() {
        path[t - 1] = back[t * k + path[t]];
    }
    (path, total)
}
