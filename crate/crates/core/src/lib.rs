pub mod families;
pub mod measures;
pub mod monogamy;
pub mod optimize;
pub mod qstate;
pub mod report;
