//! The thirteen-rule base for the Banana dataset.

use super::{ClassLabel, FuzzyRule, Mode, RuleBase, RuleWeight};
use crate::fuzzyset::MembershipFn;

/// Crisp rule regions `[(a₁, b₁), (a₂, b₂)]` and class, one per rule.
pub const BANANA_BOUNDS: [([(f64, f64); 2], u32); 13] = [
    ([(-2.41, -1.26), (-1.9, 0.52)], 1),
    ([(-0.9, 0.6), (0.52, 0.8)], 1),
    ([(-1.26, 0.9), (-0.65, 0.52)], 1),
    ([(0.9, 1.23), (-0.65, -0.15)], 1),
    ([(0.56, 1.6), (-1.9, -0.65)], 1),
    ([(1.3, 2.81), (0.81, 2.2)], 1),
    ([(-2.41, -0.9), (0.52, 2.2)], 2),
    ([(-0.9, 0.6), (0.8, 2.2)], 2),
    ([(0.6, 1.3), (0.52, 2.2)], 2),
    ([(0.9, 1.23), (-0.15, 0.52)], 2),
    ([(-1.26, 0.56), (-1.9, -0.65)], 2),
    ([(1.23, 2.81), (-0.65, 0.81)], 2),
    ([(1.6, 2.81), (-1.9, -0.65)], 2),
];

/// Trapezoid knots per rule and attribute, as published with the rule weights.
const KNOTS: [[[f64; 4]; 2]; 13] = [
    [[-2.66, -2.31, -1.36, -1.01], [-2.15, -1.8, 0.42, 0.77]],
    [[-1.15, -0.8, 0.5, 0.85], [0.27, 0.62, 0.7, 1.05]],
    [[-1.51, -1.16, 0.8, 1.15], [-0.9, -0.55, 0.42, 0.77]],
    [[0.65, 1.0, 1.13, 1.48], [-0.9, -0.55, -0.25, 0.1]],
    [[0.31, 0.66, 1.5, 1.85], [-2.15, -1.8, -0.75, -0.4]],
    [[1.05, 1.4, 2.71, 3.06], [0.56, 0.91, 2.1, 2.45]],
    [[-2.66, -2.31, -1.0, -0.65], [0.27, 0.62, 2.1, 2.45]],
    [[-1.15, -0.8, 0.5, 0.85], [0.55, 0.9, 2.1, 2.45]],
    [[0.35, 0.7, 1.2, 1.55], [0.27, 0.62, 2.1, 2.45]],
    [[0.65, 1.0, 1.13, 1.48], [-0.4, -0.05, 0.42, 0.77]],
    [[-1.51, -1.16, 0.46, 0.81], [-2.15, -1.8, -0.75, -0.4]],
    [[0.98, 1.33, 2.71, 3.06], [-0.9, -0.55, 0.71, 1.06]],
    [[1.35, 1.7, 2.71, 3.06], [-2.15, -1.8, -0.75, -0.4]],
];

/// Consequent degrees `B_j`: the share of each crisp region's points that
/// carry the rule's class.
pub const BANANA_CONSEQUENTS: [f64; 13] = [
    0.891, 0.941, 0.896, 0.923, 0.958, 0.637, 0.996, 0.778, 0.795, 0.968, 0.794, 0.987, 0.983,
];

/// Per-rule overlap letters (`a`..`e`) for the five mixed-kernel FARC-HD
/// runs; character `k` of row `j` is run `k + 1` for rule `j + 1`.
pub const TABLE5_KERNELS: [&str; 13] = [
    "cccac", "bbdec", "acabd", "aaaaa", "decae", "ddcda", "caead", "bdaea", "ecccc", "aabaa",
    "dbabc", "aaccc", "edcdb",
];

/// Per-rule semi-overlap numbers (`1`..`4`) for the five SO5I-FRC runs.
pub const TABLE7_KERNELS: [&str; 13] = [
    "33133", "41214", "21333", "34432", "13111", "23221", "34343", "43414", "22142", "32222",
    "21312", "22421", "22341",
];

/// The thirteen-rule Banana base. Rules 1–6 predict class 1 with weight
/// 1/6, rules 7–13 class 2 with weight 1/7. The default kernel is `min`.
pub fn banana_rulebase(mode: Mode) -> RuleBase {
    let rules = KNOTS
        .iter()
        .zip(BANANA_BOUNDS.iter())
        .zip(BANANA_CONSEQUENTS.iter())
        .enumerate()
        .map(|(j, ((knots, (_, class)), &b))| {
            let antecedents = knots
                .iter()
                .map(|k| MembershipFn::trapezoid(k[0], k[1], k[2], k[3]).expect("ordered knots"))
                .collect();
            let den = if *class == 1 { 6 } else { 7 };
            let (consequent, weight, kernel) = match mode {
                Mode::So5i => (Some(b), None, "so3"),
                Mode::FarcHd => (None, Some(RuleWeight { num: 1, den }), "o_a"),
            };
            FuzzyRule {
                index: j + 1,
                antecedents,
                class: ClassLabel::new(*class).expect("positive class"),
                consequent,
                weight,
                kernel: kernel.to_string(),
            }
        })
        .collect();
    RuleBase {
        mode,
        domains: vec![(-2.41, 2.81), (-1.9, 2.2)],
        rules,
    }
}
