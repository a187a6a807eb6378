#!/usr/bin/env python3
import os
import sys
import traceback

# Read flags from environment passed by make
DISPLAY_PLOT = bool(int(os.environ.get('DISPLAY_PLOT', '0')))
VERBOSE = bool(int(os.environ.get('VERBOSE', '0')))

if not DISPLAY_PLOT:
    os.environ['MPLBACKEND'] = 'Agg'

if VERBOSE:
    os.environ['LOUD_CYCLES_LOG_LEVEL'] = 'DEBUG'

try:
    sys.path.append('src')
    from loud_cycles.execution.pipeline import run_pipeline
    from loud_cycles.models.run import RunConfig

    order = os.environ.get('ORDER')
    config = RunConfig(
        command=os.environ.get('COMMAND', 'count'),
        case=os.environ.get('CASE', 's1'),
        tau=os.environ.get('TAU', '1/2'),
        order=int(order) if order else None,
        n=int(os.environ.get('N', '15')),
        display_plot=DISPLAY_PLOT,
        verbose=VERBOSE,
    )
    print(f'[runner] invoking {config.command} for {config.case} at tau = {config.tau} ...')
    report = run_pipeline(config)
    for line in report.lines:
        print('[runner]', line)
    print('[runner] Report directory:', report.directory)
    sys.exit(report.exit_code)
except Exception:
    print('[runner] ERROR: pipeline failed with exception')
    traceback.print_exc()
    sys.exit(1)
