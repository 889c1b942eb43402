"""Python bindings for the compkit component compiler."""

from ._compkit import (
    CompkitError,
    ComponentConfig,
    GenerateError,
    InjectError,
    ParseError,
    ResourceError,
    UsageError,
    __version__,
    build,
    coerce,
    dispatch,
    generate_container_wrapper,
    generate_containerfile,
    generate_native_wrapper,
    generate_workflow_module,
    image_ref,
    inject,
    load_config,
    ns_list,
    parse_args,
    parse_config,
    render_help,
    run_tests,
    scan,
    validate_config,
    view_config,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
