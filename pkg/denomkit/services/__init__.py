"""
Serviços do denomkit: um módulo por área (coeficientes, Cartan, palavras,
quivers AR, estatísticas, módulos afins, matrizes R e o laboratório de
denominadores).
"""
