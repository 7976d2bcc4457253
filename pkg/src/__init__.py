# Filled by ilpk.py: app_config (config.Config), template_dir, caps (src.caps.Caps)
services = {}
