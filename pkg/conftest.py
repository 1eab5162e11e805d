collect_ignore = ["src/set_thermo/__main__.py"]
