"""Paquete `app`: front end de línea de comandos (`app.cli`).

Sin imports en tiempo de ejecución para que importar `app` no tenga efectos secundarios.
"""
