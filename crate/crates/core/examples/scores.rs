//! Prints every rule's score under every criterion for one design.
//!
//! cargo run --release --example scores -- 28 14

use std::time::Instant;

use exact_decide::{format_decimal, Criterion, Design, Evaluator, Prior, Rule, UtilitySpec};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u32>().expect("integer argument"));
    let n = args.next().unwrap_or(20);
    let m = args.next().unwrap_or(n / 2);
    let design = Design::new(n, m).expect("valid design");

    let start = Instant::now();
    let eval =
        Evaluator::new(&design, &UtilitySpec::default(), &Prior::Uniform).expect("evaluator");
    for criterion in Criterion::ALL {
        println!("{}", criterion.title());
        for rule in Rule::ALL {
            let s = eval.score(rule, criterion);
            println!(
                "  {:<9} {:>9}  {}",
                rule.name(),
                format_decimal(&s.value, 5),
                s.witness
            );
        }
    }
    eprintln!("n={n} m={m}: {:.2?}", start.elapsed());
}
