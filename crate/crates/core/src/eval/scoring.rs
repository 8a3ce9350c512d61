use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::LabelVector;
use crate::rng::RngState;

fn entropy(counts: impl Iterator<Item = usize>, total: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `I(A;B) / sqrt(H(A) H(B))`, natural logs.
/// Two constant labelings score 1; a constant against a non-constant one scores 0.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Input(format!(
            "labelings have different lengths ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let total = a.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut ca: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cb: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *ca.entry(x).or_default() += 1;
        *cb.entry(y).or_default() += 1;
    }
    let ha = entropy(ca.values().copied(), total);
    let hb = entropy(cb.values().copied(), total);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    // Ordered maps keep every float sum in a fixed order.
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &c)| {
            let pxy = c as f64 / total;
            let px = ca[&x] as f64 / total;
            let py = cb[&y] as f64 / total;
            pxy * (pxy / (px * py)).ln()
        })
        .sum();
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

/// `per_class` uniformly chosen training nodes from every class; all other
/// nodes are test nodes. Both lists are sorted.
pub fn train_test_split(
    labels: &LabelVector,
    per_class: usize,
    rng: &mut RngState,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let members = labels.class_members();
    if let Some((class, m)) = members.iter().enumerate().find(|(_, m)| m.len() < per_class) {
        return Err(Error::Input(format!(
            "class {class} has {} nodes, fewer than {per_class}",
            m.len()
        )));
    }
    let mut is_train = vec![false; labels.len()];
    for m in &members {
        for i in rng.sample_indices(m.len(), per_class) {
            is_train[m[i]] = true;
        }
    }
    let (train, test): (Vec<usize>, Vec<usize>) = (0..labels.len()).partition(|&v| is_train[v]);
    Ok((train, test))
}
