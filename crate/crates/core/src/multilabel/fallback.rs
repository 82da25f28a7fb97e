use std::cmp::Ordering;

use super::LabelSet;

/// Replaces an empty prediction by the single highest-scoring label.
///
/// Non-empty predictions pass through untouched. Score ties go to the label
/// seen more often in training, then to the lower label index. NaN scores
/// never win.
pub fn force_min_one_label(pred: &LabelSet, scores: &[f64], label_frequencies: &[usize]) -> LabelSet {
    if !pred.is_empty() || scores.is_empty() {
        return pred.clone();
    }
    let key = |l: usize| {
        let s = scores[l];
        (
            if s.is_nan() { f64::NEG_INFINITY } else { s },
            label_frequencies.get(l).copied().unwrap_or(0),
        )
    };
    let best = (0..scores.len())
        .reduce(|best, l| {
            let (bs, bf) = key(best);
            let (s, f) = key(l);
            match s.partial_cmp(&bs).unwrap_or(Ordering::Equal).then(f.cmp(&bf)) {
                Ordering::Greater => l,
                _ => best,
            }
        })
        .expect("scores nonempty");
    LabelSet::singleton(best)
}
