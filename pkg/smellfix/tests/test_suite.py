import unittest

from . import (test_backends, test_cli, test_detector, test_evaluator, test_extraction, test_fix_loop,
               test_metrics, test_miner, test_prompts, test_reports, test_snippets, test_syntax_model)

MODULES = (
    test_syntax_model,
    test_metrics,
    test_detector,
    test_snippets,
    test_prompts,
    test_extraction,
    test_backends,
    test_fix_loop,
    test_evaluator,
    test_reports,
    test_miner,
    test_cli,
)


def suite():
    load = unittest.defaultTestLoader.loadTestsFromModule
    test_suite = unittest.TestSuite()
    for module in MODULES:
        test_suite.addTest(load(module))
    return test_suite


if __name__ == '__main__':
    runner = unittest.TextTestRunner()
    runner.run(suite())
