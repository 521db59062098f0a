//! Command-line front end and JSON formats for `onsager-core`.

pub mod cli;
pub mod commands;
pub mod report;

/// Configures the global thread pool from `ONSAGER_KIT_THREADS` (`0` or unset
/// means one thread per core).
pub fn init_threads() -> Result<(), String> {
    let n = match std::env::var("ONSAGER_KIT_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("ONSAGER_KIT_THREADS must be a nonnegative integer, got `{v}`"))?,
        Err(_) => 0,
    };
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}
