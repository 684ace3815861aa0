//! Machine-subset and load-vector dynamic programs, and the FPTAS for a fixed machine count.

mod fptas;
mod load_dp;
mod machine_dp;

pub use fptas::{fptas_fixed_m, GridRounding};
pub use load_dp::{solve_load_dp, LoadTable, DEFAULT_STATE_BUDGET};
pub(crate) use machine_dp::bits;
pub use machine_dp::{solve_machine_dp, solve_machine_dp_with_cap, MachineDpTable, DEFAULT_JOB_CAP};
