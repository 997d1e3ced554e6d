use std::env;

pub struct Options {
    pub verbose: bool,
    pub output: Option<String>,
    pub inputs: Vec<String>,
}

pub fn parse_args() -> Result<Options, String> {
    let mut opts = Options { verbose: false, output: None, inputs: Vec::new() };
    let mut args = env::args().skip(1);
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "-v" | "--verbose" => opts.verbose = true,
            "-o" | "--output" => {
                let value = args.next().ok_or("missing value for --output")?;
                opts.output = Some(value);
            }
            other if other.starts_with('-') => {
                return Err(format!("unknown flag {}", other));
            }
            other => opts.inputs.push(other.to_string()),
        }
    }
    if opts.inputs.is_empty() {
        return Err("no inputs given".to_string());
    }
    Ok(opts)
}
