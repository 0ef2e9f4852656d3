use crate::error::{Error, Result};

/// Version stamped into every JSON artifact.
pub const FORMAT_VERSION: u32 = 1;

pub fn check_format_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {found} (this build reads version {FORMAT_VERSION})"
        )));
    }
    Ok(())
}
