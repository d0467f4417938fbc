"""Package version bookkeeping for saved reports."""

import warnings
from importlib import metadata

from eigeninfer.errors import VersionMismatchWarning

TRACKED_PACKAGES = ('eigeninfer', 'numpy', 'scipy', 'sympy')


def get_package_versions():
    """Get the installed versions of the packages that shape numerical results.

    Returns:
        dict:
            A mapping of library to current version. Packages that are not installed
            are left out.
    """
    versions = {}
    for lib in TRACKED_PACKAGES:
        try:
            versions[lib] = metadata.version(lib)
        except metadata.PackageNotFoundError:
            pass

    return versions


def version_mismatches(saved_versions):
    """Get ``{package: (saved, installed)}`` for every tracked package whose version changed.

    A package missing on either side shows up as ``None``.
    """
    installed = get_package_versions()
    return {
        lib: (saved_versions.get(lib), installed.get(lib))
        for lib in TRACKED_PACKAGES
        if saved_versions.get(lib) != installed.get(lib)
    }


def warn_on_version_mismatch(saved_versions):
    """Warn with a ``VersionMismatchWarning`` if a report was saved with other versions."""
    if saved_versions is None:
        warnings.warn('The report carries no package versions. Results may not be reproducible.',
                      VersionMismatchWarning)
        return

    mismatches = version_mismatches(saved_versions)
    if mismatches:
        details = ', '.join(
            f'{lib} {saved} -> {installed}' for lib, (saved, installed) in mismatches.items())
        warnings.warn(f'The report was saved with other package versions ({details}). '
                      'Results may not be reproducible.', VersionMismatchWarning)
