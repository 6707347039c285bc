//! The eleven-vertex worked example: cut-tree, marks and outcome.

use std::fmt::Write as _;

use cayley_fires::cuttree::{build_cut_tree, mark_and_erase, read_outcome};
use cayley_fires::dynamics::run_forward;
use cayley_fires::figure::{figure_coins, figure_label, figure_order, figure_tree};

use crate::error::CliError;
use crate::report::{Check, SuiteReport};

fn letters(labels: &[u32]) -> String {
    labels.iter().map(|&l| figure_label(l)).collect()
}

pub fn run() -> Result<SuiteReport, CliError> {
    let mut report = SuiteReport::new("cuttree-demo");
    let (tree, order, coins) = (figure_tree(), figure_order(), figure_coins());
    let ct = build_cut_tree(&tree, &order)?;
    let marks = mark_and_erase(&ct, &coins)?;
    let outcome = read_outcome(&ct, &marks);

    let mut text = String::new();
    let _ = writeln!(text, "edges in removal order:");
    for (k, &e) in order.as_slice().iter().enumerate() {
        let (u, v) = tree.edges()[e as usize];
        let _ = writeln!(
            text,
            "  {:>2}: {}-{}{}",
            k + 1,
            figure_label(u),
            figure_label(v),
            if coins.as_slice()[k] { "  fire" } else { "" }
        );
    }
    let _ = writeln!(text, "\ncut-tree:");
    text.push_str(&ct.render(figure_label));
    let _ = writeln!(text, "\nmarked steps: {:?}", marks.raw);
    let _ = writeln!(text, "kept after erasure: {:?}", marks.kept);
    let _ = writeln!(text, "fireproof vertices: {}", outcome.fireproof);
    let _ = writeln!(text, "burnt sizes by appearance: {:?}", outcome.burnt_by_appearance);
    let _ = writeln!(text, "fireproof components: {:?}", outcome.fireproof_components);

    let blocks: Vec<String> = (1..=order.len()).map(|k| letters(&ct.block(ct.internal_node(k)))).collect();
    let expected = ["abcdefghijk", "bcfgij", "fg", "bcij", "cij", "ij", "adehk", "adek", "ade", "ae"];
    let mut sorted_blocks = blocks.clone();
    sorted_blocks.sort();
    let mut sorted_expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    sorted_expected.sort();
    report.checks.push(Check::holds("cut-tree blocks", sorted_blocks == sorted_expected));
    report.checks.push(Check::holds("fireproof count", outcome.fireproof == 5));
    report.checks.push(Check::holds("burnt sizes", outcome.burnt_by_appearance == vec![4, 2]));
    report.checks.push(Check::holds("fire steps", outcome.fire_steps == vec![6, 9]));
    report.checks.push(Check::holds("fireproof components", outcome.fireproof_components == vec![2, 1, 1, 1]));
    report.checks.push(Check::holds("forward simulation agrees", run_forward(&tree, &order, &coins)? == outcome));
    report.text = Some(text);
    Ok(report)
}

#[cfg(test)]
mod tests {
    #[test]
    fn worked_example_passes() {
        let r = super::run().unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        assert!(r.text.unwrap().contains("burnt sizes by appearance: [4, 2]"));
    }
}
