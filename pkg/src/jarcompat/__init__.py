"""jarcompat: binary-compatibility analysis for Java libraries.

Detects binary-incompatible changes between two JAR versions, locates the
client code impacted by each change, classifies upgrades against semantic
versioning, and supports corpus-scale derivation and statistical analysis.
"""

__version__ = "0.1.0"
