//! Effective settings: command-line flag, then config file, then default.

use std::fs;

use distill::config::parse_flat;
use distill::{Language, Partition, ReportFormat, RuleConfig};

use crate::{Common, Failure};

pub struct Settings {
    pub rules: RuleConfig,
    pub jobs: usize,
    pub language: Language,
    pub partition: Partition,
    /// `None` lets the caller pick (for example from a file extension).
    pub format: Option<ReportFormat>,
}

pub fn job_count(flag: Option<usize>) -> Result<usize, Failure> {
    match flag {
        Some(0) => Err("--jobs must be at least 1".into()),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

impl Settings {
    pub fn load(common: &Common, format_flag: Option<&str>) -> Result<Settings, Failure> {
        let mut rules = RuleConfig::default();
        let (mut jobs, mut language, mut partition, mut format) = (None, None, None, None);
        if let Some(path) = &common.config {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            for (line, key, value) in parse_flat(&text)? {
                let at = |e: String| format!("{}:{line}: {e}", path.display());
                match key.as_str() {
                    "jobs" => jobs = Some(value.parse::<usize>().map_err(|_| at(format!("jobs: bad number {value}")))?),
                    "language" => language = Some(value.parse::<Language>().map_err(|e| at(e.to_string()))?),
                    "partition" => partition = Some(value.parse::<Partition>().map_err(|e| at(e.to_string()))?),
                    "format" => format = Some(value.parse::<ReportFormat>().map_err(|e| at(e.to_string()))?),
                    _ => {
                        if !rules.apply(&key, &value).map_err(|e| at(e.to_string()))? {
                            return Err(at(format!("unknown key {key}")).into());
                        }
                    }
                }
            }
            rules.validate()?;
        }
        if let Some(flag) = format_flag {
            format = Some(flag.parse()?);
        }
        if let Some(l) = &common.language {
            language = Some(l.parse()?);
        }
        if let Some(p) = &common.partition {
            partition = Some(p.parse()?);
        }
        Ok(Settings {
            rules,
            jobs: job_count(common.jobs.or(jobs))?,
            language: language.unwrap_or(Language::Java),
            partition: partition.unwrap_or(Partition::Train),
            format,
        })
    }
}
