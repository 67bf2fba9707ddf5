from .frame_summary import fit_log_log_rate, is_strictly_decreasing, summarize_column, tail_rows
from .report_data_provider import (BACKENDS, ReportDataProvider, ReportDataProviderForPandas,
                                   ReportDataProviderForPolars, load_run_config, path_to_data_file, provider_for)
