# Do not edit this file, it is automatically generated by scripts/generate_version.py
VERSION = "0.1.0"
