/// Every subcommand at a size small enough to run twice.
pub const QUICK_RUNS: &[&[&str]] = &[
    &["table1"],
    &["table2"],
    &["table3"],
    &["table4"],
    &["table4-osc"],
    &["table5"],
    &["table6"],
    &["tangential", "--quadrature"],
    &["oscillation", "--oracle", "--elements", "64", "--steps", "4"],
    &["fieldscan", "--points", "5"],
    &["fig8", "--points", "3"],
    &["shape-sweep", "--points", "3", "--elements", "64"],
    &["fig7", "--points", "3", "--elements", "64"],
    &["brownian-sweep", "--points", "5"],
    &["fig10", "--points", "3"],
    &["tradeoff", "--points-u", "4", "--points-eta", "4"],
    &["fig11", "--points-u", "3", "--points-eta", "3", "--method", "oscillating"],
];
