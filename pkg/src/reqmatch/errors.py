"""Exception taxonomy shared by every module.

Four kinds of failure, all ValueError subclasses so callers that only care
about "bad input" can catch one base:

* ShapeError  -- tensor dimensions do not line up
* UsageError  -- an API contract was violated by the caller
* DataError   -- external data (files, records, ids) is malformed
* ConfigError -- impossible configuration values
"""


class ShapeError(ValueError):
    pass


class UsageError(ValueError):
    pass


class DataError(ValueError):
    pass


class ConfigError(ValueError):
    pass
