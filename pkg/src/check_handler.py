import logging
from typing import Any, Dict, Iterable

logger = logging.getLogger("check_handler")

check_registry = {}


def register_check(check_name):
    def decorator(func):
        check_registry[check_name] = func
        return func
    return decorator


def execute_check(context, check_name, **kwargs):
    if check_name in check_registry:
        return check_registry[check_name](context, **kwargs)
    else:
        logger.error(f"Check {check_name} not found")
        return None


def run_checks(context, check_names: Iterable[str]) -> Dict[str, Any]:
    """Run the named checks in order; entries are None for unknown names"""
    results = {}
    for name in check_names:
        result = execute_check(context, name)
        passed = getattr(result, "passed", None)
        if passed is False:
            logger.info(f"❌ {name}")
        elif result is not None:
            logger.info(f"✅ {name}")
        results[name] = result
    return results
