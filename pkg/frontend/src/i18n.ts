/** Cyrillic-first labels with an English toggle. */

const RU = {
  'screen.catalog': 'Электронные каталоги',
  'screen.wizard': 'Выбор изделия',
  'screen.editor': 'Редактор таблиц',
  'screen.inspector': 'Позиционные обозначения',
  'catalog.filter.pipe': 'Только трубы',
  'catalog.filter.kip': 'Приборы КИП',
  'catalog.open': 'Открыть',
  'wizard.answer': 'Ответить',
  'wizard.finish': 'Завершить',
  'wizard.done': 'Выбор завершён',
  'editor.mark': 'Отметка строк',
  'editor.markRange': 'Отметка ряда строк',
  'editor.unmark': 'Снятие отметок',
  'editor.copy': 'Копирование',
  'editor.move': 'Перенос',
  'editor.delete': 'Удаление',
  'editor.clear': 'Очистка',
  'editor.toBuffer': 'В буфер изделий',
  'editor.fromBuffer': 'Из буфера изделий',
  'editor.undo': 'Возврат изменения',
  'editor.section': 'Новый раздел',
  'editor.paginate': 'Разбивка на куски',
  'inspector.duplicates': 'Дубликаты',
  'inspector.structures': 'Структуры с частотами',
  'inspector.hints': 'Возможные ошибки',
} as const

export type LabelKey = keyof typeof RU

const EN: Record<LabelKey, string> = {
  'screen.catalog': 'Catalogs',
  'screen.wizard': 'Product selection',
  'screen.editor': 'Table editor',
  'screen.inspector': 'Position designations',
  'catalog.filter.pipe': 'Pipes only',
  'catalog.filter.kip': 'Instrumentation',
  'catalog.open': 'Open',
  'wizard.answer': 'Answer',
  'wizard.finish': 'Finish',
  'wizard.done': 'Selection finished',
  'editor.mark': 'Mark rows',
  'editor.markRange': 'Mark row range',
  'editor.unmark': 'Unmark',
  'editor.copy': 'Copy',
  'editor.move': 'Move',
  'editor.delete': 'Delete',
  'editor.clear': 'Clear',
  'editor.toBuffer': 'To goods buffer',
  'editor.fromBuffer': 'From goods buffer',
  'editor.undo': 'Undo change',
  'editor.section': 'New section',
  'editor.paginate': 'Paginate',
  'inspector.duplicates': 'Duplicates',
  'inspector.structures': 'Structures with frequencies',
  'inspector.hints': 'Possible mistakes',
}

export function label(key: LabelKey, language: 'ru' | 'en'): string {
  return language === 'ru' ? RU[key] : EN[key]
}
